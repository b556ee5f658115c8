"""Cone projections, mixed envelopes and LP certificates of minimality."""

from .asymnorm import ConeNormReport, NormKind, OrderChoice, check_axioms, check_isotone, eval_norm
from .cones import (ConePair, ConeSpec, cone_to_json, contains, contains_cone, dual_cone,
                    interior_dual_direction, is_pointed, make_cone, membership_violation)
from .context import GmlsContext, MixedLatticeContext, Realization
from .envelopes import (DecompositionResult, LatticeOps, Parts, check_envelope_identities,
                        check_part_identities, lattice_like_ops, lower_envelope,
                        moreau_decompose, parts, upper_envelope)
from .exceptions import (CertificationError, ConeError, ConelatError, ContextError,
                         ConvergenceError, DimensionError, NotInSetError, ProjectionError,
                         UnsupportedRepresentationError)
from .gmls import (ExtremalityCertificate, ExtremalKind, MinSetSample, Verdict,
                   brute_force_min_set, certify_extremal, certify_projection_minimal,
                   check_gmls_properties, detect_mixed_lattice, dual_membership, in_lower_set,
                   in_upper_set, orthogonality_maximality, representation_decompose,
                   sample_max_set, sample_min_set)
from .numerics import (DEFAULT_TOL, LpProblem, LpResult, LpStatus, Tolerances, lp_solve, nnls,
                       solve_least_squares)
from .projection import (ProjectionResult, moreau_split, project, project_dual,
                         project_translated, verify_nearest)
from .report import ClauseRecord, PropertyReport

__version__ = "0.1.0"
