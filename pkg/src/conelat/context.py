"""Ordered-pair contexts: the specific cone S (order ≼) inside the initial
cone P (order ≤)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .cones import (ConePair, ConeSpec, contains, contains_cone, dual_cone, is_pointed,
                    make_cone, membership_violation, same_cone)
from .exceptions import ContextError, UnsupportedRepresentationError
from .numerics import DEFAULT_TOL, Tolerances
from .sampling import cone_boundary_point, cone_point

__all__ = ["Realization", "MixedLatticeContext", "GmlsContext", "membership_equivalent"]

_EQUIV_SAMPLES = 300


class Realization(str, enum.Enum):
    PROJECTION = "ProjectionRealized"
    ABSTRACT = "Abstract"


def membership_equivalent(K1, K2, tol=DEFAULT_TOL, samples=_EQUIV_SAMPLES, seed=0):
    """Do ``K1`` and ``K2`` describe the same set?

    Exact for structurally equal descriptions; otherwise decided on Gaussian
    points plus boundary points of both cones.
    """
    if same_cone(K1, K2):
        return True
    if K1.dim != K2.dim:
        return False
    rng = np.random.default_rng(seed)
    pts = [rng.standard_normal(K1.dim) for _ in range(samples)]
    pts += [cone_boundary_point(K, rng) for K in (K1, K2) for _ in range(samples // 3)]
    pts += [cone_point(K, rng) for K in (K1, K2) for _ in range(samples // 3)]
    return all(contains(K1, p, tol) == contains(K2, p, tol) for p in pts)


def _sampled_inclusion(K1, K2, tol, samples=_EQUIV_SAMPLES, seed=0):
    rng = np.random.default_rng(seed)
    pts = [cone_boundary_point(K1, rng) for _ in range(samples)]
    return all(contains(K2, p, tol) for p in pts)


@dataclass(frozen=True, eq=False)
class MixedLatticeContext:
    """The pair ``(S, P)`` with ``S ⊆ P`` that defines the two orders.

    ``initial`` defaults to the dual of ``specific``. When ``P`` is (as a
    set) the dual of ``S`` the context is *projection realized*: envelopes
    are computed from a single projection onto ``S``.
    """

    specific: ConeSpec
    initial: ConeSpec | None = None
    tol: Tolerances = DEFAULT_TOL
    realization: Realization = field(init=False)
    lattice: bool = field(init=False)

    def __post_init__(self):
        S = make_cone(self.specific, self.tol)
        P = dual_cone(S) if self.initial is None else make_cone(self.initial, self.tol)
        object.__setattr__(self, "specific", S)
        object.__setattr__(self, "initial", P)
        if S.dim != P.dim:
            raise ContextError(f"cones live in R^{S.dim} and R^{P.dim}")
        for K in (S, P):
            if not is_pointed(K, self.tol).pointed:
                raise ContextError(f"{K.label} is not pointed")
        try:
            inside = contains_cone(S, P, self.tol)
        except UnsupportedRepresentationError:
            inside = _sampled_inclusion(S, P, self.tol)
        if not inside:
            raise ContextError(f"specific cone {S.label} is not contained in {P.label}")
        realized = membership_equivalent(P, dual_cone(S), self.tol)
        object.__setattr__(
            self, "realization", Realization.PROJECTION if realized else Realization.ABSTRACT)
        # S = P = orthant is a vector lattice, where every clause holds
        object.__setattr__(
            self, "lattice", S.kind == "orthant" and P.kind == "orthant")

    @classmethod
    def for_cone(cls, K, tol=DEFAULT_TOL, **kwargs):
        """Context ``(K, K*)``, or ``(K*, K)`` when only ``K* ⊆ K`` holds."""
        K = make_cone(K, tol)
        D = dual_cone(K)
        try:
            forward = contains_cone(K, D, tol)
        except UnsupportedRepresentationError:
            forward = _sampled_inclusion(K, D, tol)
        if forward:
            return cls(K, D, tol, **kwargs)
        return cls(D, K, tol, **kwargs)

    @property
    def pair(self):
        return ConePair(self.specific, self.initial)

    @property
    def dim(self):
        return self.specific.dim

    @property
    def projection_realized(self):
        return self.realization is Realization.PROJECTION

    @property
    def label(self):
        return f"{self.specific.label}/{self.initial.label}"

    def require_realized(self, what="this operation"):
        if not self.projection_realized:
            raise ContextError(
                f"{what} needs the initial cone to be the dual of the specific cone "
                f"(context {self.label} is {self.realization.value})")

    def in_specific(self, v):
        return contains(self.specific, v, self.tol)

    def in_initial(self, v):
        return contains(self.initial, v, self.tol)

    def specific_violation(self, v):
        return membership_violation(self.specific, v, self.tol)

    def initial_violation(self, v):
        return membership_violation(self.initial, v, self.tol)


@dataclass(frozen=True, eq=False)
class GmlsContext(MixedLatticeContext):
    """Context for the set-valued layer; adds the LP probe box.

    The initial cone must be generating (full-dimensional), otherwise the
    envelope sets can be empty.
    """

    probe_box: float = 1e6

    def __post_init__(self):
        super().__post_init__()
        if not (self.probe_box > 0 and np.isfinite(self.probe_box)):
            raise ContextError("probe_box must be a positive finite number")
        # P generating  <=>  P* pointed
        if not is_pointed(dual_cone(self.initial), self.tol).pointed:
            raise ContextError(f"initial cone {self.initial.label} is not generating")

    @classmethod
    def from_context(cls, ctx, probe_box=1e6):
        return cls(ctx.specific, ctx.initial, ctx.tol, probe_box=probe_box)
