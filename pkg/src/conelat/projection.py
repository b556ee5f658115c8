"""Metric projection onto closed convex cones.

Every call to :func:`project` checks its own output against the nearest-point
characterization (``p in K``, ``p - x in K*``, ``<x - p, p> = 0``) and raises
:class:`~conelat.exceptions.ProjectionError` if the check fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cones import ConeSpec, _check_dim, contains, dual_cone, membership_violation
from .exceptions import ProjectionError
from .numerics import DEFAULT_TOL, as_vector, nnls

__all__ = [
    "ProjectionResult",
    "NearestCheck",
    "project",
    "project_translated",
    "project_dual",
    "verify_nearest",
    "moreau_split",
]


@dataclass(frozen=True)
class ProjectionResult:
    point: np.ndarray
    distance: float
    characterization_residual: float


class NearestCheck(NamedTuple):
    ok: bool
    residual: float

    def __bool__(self):
        return self.ok


def _lorentz_projection(x):
    u, t = x[:-1], x[-1]
    nu = np.linalg.norm(u)
    if nu <= t:
        return x.copy()
    if nu <= -t:
        return np.zeros_like(x)
    # nu > |t| >= 0 here, so the division is safe
    a = 0.5 * (nu + t)
    return np.concatenate([a * u / nu, [a]])


def _generator_projection(G, x, tol):
    lam = nnls(G.T, x, tol)
    return G.T @ lam


def _raw_projection(K, x, tol):
    if K.kind == "orthant":
        return np.maximum(x, 0.0)
    if K.kind == "lorentz":
        return _lorentz_projection(x)
    if K.kind == "halfspaces":
        # K = (cone of rows)*, so P_K x = x + P_{cone rows}(-x)
        return x + _generator_projection(K.rows, -x, tol)
    return _generator_projection(K.generators, x, tol)


def _characterization(K, x, p, tol):
    """Residual terms of the nearest-point characterization and their bounds."""
    scale = 1.0 + np.linalg.norm(x) + np.linalg.norm(p)
    r = x - p
    terms = {
        "primal": membership_violation(K, p, tol),
        "orthogonality": abs(float(r @ p)),
    }
    G = K.generators
    if G is not None:
        Gn = G / np.linalg.norm(G, axis=1, keepdims=True)
        terms["dual"] = max(float((Gn @ r).max()), 0.0)
    else:
        terms["dual"] = membership_violation(dual_cone(K), -r, tol)
    return terms, tol.feas * scale


def verify_nearest(K, x, p, tol=DEFAULT_TOL):
    """Check that ``p`` is the nearest point of ``K`` to ``x``.

    Tests ``p in K``, ``<x - p, g> <= 0`` for every generator ``g`` (or
    ``p - x in K*`` for cones without a finite generator list) and
    ``<x - p, p> = 0``, all within ``tol.feas * (1 + ||x|| + ||p||)``.

    Returns
    -------
    NearestCheck
        ``ok`` flag and the worst raw residual.
    """
    x = _check_dim(K, x)
    p = _check_dim(K, p)
    terms, bound = _characterization(K, x, p, tol)
    worst = max(terms.values())
    return NearestCheck(worst <= bound, worst)


def project(K, x, tol=DEFAULT_TOL):
    """Euclidean projection of ``x`` onto ``K``.

    Orthant and Lorentz cones use closed forms; generator cones solve an NNLS
    problem; halfspace cones go through the dual generator cone.
    """
    x = _check_dim(K, x)
    p = _raw_projection(K, x, tol)
    terms, bound = _characterization(K, x, p, tol)
    worst = max(terms.values())
    if worst > bound:
        raise ProjectionError(
            f"projection onto {K.label} failed verification "
            f"(residual {worst:.3e} > {bound:.3e})", residuals=terms)
    return ProjectionResult(p, float(np.linalg.norm(x - p)), worst)


def project_translated(K, base, y, tol=DEFAULT_TOL):
    """Projection of ``y`` onto the translated cone ``base + K``."""
    base = _check_dim(K, base)
    y = _check_dim(K, y)
    return base + project(K, y - base, tol).point


def project_dual(K, x, tol=DEFAULT_TOL):
    """Projection onto the dual cone via ``P_{K*}(x) = x + P_K(-x)``."""
    x = _check_dim(K, x)
    q = x + project(K, -x, tol).point
    if not contains(dual_cone(K), q, tol):
        raise ProjectionError(f"dual projection for {K.label} left the dual cone")
    return q


def moreau_split(K, x, tol=DEFAULT_TOL):
    """Return ``(P_K x, P_{K*}(-x))``, computed by two separate projections."""
    x = as_vector(x)
    plus = project(K, x, tol).point
    minus = project(dual_cone(K), -x, tol).point
    return plus, minus
