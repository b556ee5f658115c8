"""Closed convex pointed cones in R^n: representations, membership, duality.

Matrices always hold one generator (or one inward normal) per *row*.

Supported variants
------------------
generators   cone{g_1, ..., g_m}, rows of ``G``
halfspaces   {x : A x >= 0}, rows of ``A``
orthant      nonnegative orthant of R^n
lorentz      {(u, t) in R^(n-1) x R : ||u|| <= t}
pyramid      cone over (+-1, +-1, 1) in R^3
diamond      cone over (+-1, 0, 1), (0, +-1, 1) in R^3 (dual of pyramid)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import ConeError, DimensionError, UnsupportedRepresentationError
from .numerics import DEFAULT_TOL, LpProblem, LpStatus, as_matrix, as_vector, lp_solve, nnls

__all__ = [
    "ConeSpec",
    "ConePair",
    "PointednessResult",
    "PYRAMID_GENERATORS",
    "DIAMOND_GENERATORS",
    "make_cone",
    "cone_to_json",
    "contains",
    "membership_violation",
    "dual_cone",
    "contains_cone",
    "is_pointed",
    "same_cone",
    "interior_dual_direction",
]

PYRAMID_GENERATORS = np.array(
    [[1.0, 1.0, 1.0], [-1.0, 1.0, 1.0], [-1.0, -1.0, 1.0], [1.0, -1.0, 1.0]])
DIAMOND_GENERATORS = np.array(
    [[1.0, 0.0, 1.0], [-1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [0.0, -1.0, 1.0]])

_KINDS = ("generators", "halfspaces", "orthant", "lorentz", "pyramid", "diamond")


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ConeSpec:
    """An immutable cone description.

    Use :func:`make_cone` or the classmethod constructors rather than calling
    this directly; they validate the data.
    """

    kind: str
    dim: int
    rows: np.ndarray | None = None

    @classmethod
    def orthant(cls, n):
        if int(n) < 1:
            raise ConeError("orthant dimension must be >= 1")
        return cls("orthant", int(n))

    @classmethod
    def lorentz(cls, n):
        if int(n) < 2:
            raise ConeError("lorentz dimension must be >= 2")
        return cls("lorentz", int(n))

    @classmethod
    def pyramid(cls):
        return cls("pyramid", 3, _frozen(PYRAMID_GENERATORS))

    @classmethod
    def diamond(cls):
        return cls("diamond", 3, _frozen(DIAMOND_GENERATORS))

    @classmethod
    def from_generators(cls, rows, tol=DEFAULT_TOL, check_pointed=True):
        G = as_matrix(np.atleast_2d(rows), "generators")
        if np.any(np.linalg.norm(G, axis=1) == 0):
            raise ConeError("generator rows must be nonzero")
        cone = cls("generators", G.shape[1], _frozen(G))
        if check_pointed:
            _require_pointed(cone, tol)
        return cone

    @classmethod
    def from_halfspaces(cls, rows, tol=DEFAULT_TOL, check_pointed=True):
        A = as_matrix(np.atleast_2d(rows), "halfspaces")
        if np.any(np.linalg.norm(A, axis=1) == 0):
            raise ConeError("halfspace normals must be nonzero")
        cone = cls("halfspaces", A.shape[1], _frozen(A))
        if check_pointed:
            _require_pointed(cone, tol)
        return cone

    @property
    def generators(self):
        """Generator rows, or ``None`` when only an implicit form is known."""
        if self.kind == "orthant":
            return np.eye(self.dim)
        if self.kind in ("generators", "pyramid", "diamond"):
            return self.rows
        return None

    @property
    def halfspaces(self):
        """Inward normal rows, or ``None`` when not known."""
        if self.kind == "orthant":
            return np.eye(self.dim)
        if self.kind == "halfspaces":
            return self.rows
        if self.kind == "pyramid":
            return DIAMOND_GENERATORS
        if self.kind == "diamond":
            return PYRAMID_GENERATORS
        return None

    @property
    def label(self):
        if self.kind in ("orthant", "lorentz"):
            return f"{self.kind}({self.dim})"
        if self.kind in ("pyramid", "diamond"):
            return self.kind
        return f"{self.kind}[{self.rows.shape[0]}x{self.dim}]"

    def __repr__(self):
        return f"ConeSpec({self.label})"


class ConePair(NamedTuple):
    """Specific cone S (order ≼) and initial cone P (order ≤), S ⊆ P."""

    specific: ConeSpec
    initial: ConeSpec


class PointednessResult(NamedTuple):
    pointed: bool
    witness: np.ndarray | None = None

    def __bool__(self):
        return self.pointed


def same_cone(K1, K2):
    """Structural equality of two cone descriptions."""
    if K1.kind != K2.kind or K1.dim != K2.dim:
        return False
    if K1.rows is None or K2.rows is None:
        return K1.rows is None and K2.rows is None
    return K1.rows.shape == K2.rows.shape and np.array_equal(K1.rows, K2.rows)


def make_cone(spec, tol=DEFAULT_TOL):
    """Build a validated :class:`ConeSpec` from its JSON-style description.

    >>> make_cone({"type": "orthant", "dim": 3})
    ConeSpec(orthant(3))
    """
    if isinstance(spec, ConeSpec):
        return spec
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConeError("cone description must be an object with a 'type' field")
    kind = spec["type"]
    if kind not in _KINDS:
        raise ConeError(f"unknown cone type {kind!r}; expected one of {', '.join(_KINDS)}")
    if kind in ("orthant", "lorentz"):
        if "dim" not in spec:
            raise ConeError(f"{kind} cone needs a 'dim' field")
        dim = spec["dim"]
        if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)):
            raise ConeError("'dim' must be an integer")
        return ConeSpec.orthant(dim) if kind == "orthant" else ConeSpec.lorentz(dim)
    if kind == "pyramid":
        return ConeSpec.pyramid()
    if kind == "diamond":
        return ConeSpec.diamond()
    rows = spec.get("rows")
    if not rows:
        raise ConeError(f"{kind} cone needs a nonempty 'rows' field")
    try:
        lengths = {len(r) for r in rows}
    except TypeError:
        raise ConeError("'rows' must be a list of lists") from None
    if len(lengths) != 1:
        raise ConeError("all rows must have the same length")
    if kind == "generators":
        return ConeSpec.from_generators(rows, tol)
    return ConeSpec.from_halfspaces(rows, tol)


def cone_to_json(K):
    """Inverse of :func:`make_cone`."""
    if K.kind in ("orthant", "lorentz"):
        return {"type": K.kind, "dim": K.dim}
    if K.kind in ("pyramid", "diamond"):
        return {"type": K.kind}
    return {"type": K.kind, "rows": K.rows.tolist()}


def _check_dim(K, x):
    x = as_vector(x)
    if x.shape[0] != K.dim:
        raise DimensionError(f"vector of length {x.shape[0]} for cone in R^{K.dim}")
    return x


def membership_violation(K, x, tol=DEFAULT_TOL):
    """Nonnegative distance-like measure of how far ``x`` lies outside ``K``.

    Exact Euclidean distance for generator cones (via NNLS); worst normalized
    halfspace violation when inward normals are known; ``(||u|| - t)+ / sqrt 2``
    for the Lorentz cone.
    """
    x = _check_dim(K, x)
    if K.kind == "orthant":
        return float(np.maximum(-x, 0.0).max())
    if K.kind == "lorentz":
        return max(float(np.linalg.norm(x[:-1]) - x[-1]), 0.0) / np.sqrt(2.0)
    A = K.halfspaces
    if A is not None:
        An = A / np.linalg.norm(A, axis=1, keepdims=True)
        return float(np.maximum(-(An @ x), 0.0).max())
    G = K.generators
    lam = nnls(G.T, x, tol)
    return float(np.linalg.norm(G.T @ lam - x))


def contains(K, x, tol=DEFAULT_TOL):
    """Membership test ``x in K`` within ``tol.feas * (1 + ||x||)``."""
    x = _check_dim(K, x)
    return membership_violation(K, x, tol) <= tol.feas * (1.0 + np.linalg.norm(x))


def dual_cone(K):
    """The dual cone ``K* = {y : <x, y> >= 0 for all x in K}``.

    Generator and halfspace forms swap; the built-in cones map to built-ins.
    No vertex/facet enumeration is attempted, and the result is not checked
    for pointedness (the dual of a cone with empty interior has a lineality
    space).
    """
    if K.kind in ("orthant", "lorentz"):
        return K
    if K.kind == "pyramid":
        return ConeSpec.diamond()
    if K.kind == "diamond":
        return ConeSpec.pyramid()
    if K.kind == "generators":
        return ConeSpec("halfspaces", K.dim, K.rows)
    return ConeSpec("generators", K.dim, K.rows)


def contains_cone(K1, K2, tol=DEFAULT_TOL):
    """``K1 ⊆ K2``, decided by testing every generator of ``K1``."""
    if K1.dim != K2.dim:
        raise DimensionError(f"cones live in R^{K1.dim} and R^{K2.dim}")
    if same_cone(K1, K2):
        return True
    G = K1.generators
    if G is None:
        raise UnsupportedRepresentationError(
            f"{K1.label} has no generator form; containment cannot be decided")
    return all(contains(K2, g, tol) for g in G)


def _lineality_probe(G, tol):
    """Max of +-d_i over {d = G^T lam = -G^T mu, |d_i| <= 1}; witness or None."""
    m, n = G.shape
    # variables: lam (m), mu (m), s_plus (n), s_minus (n)
    #   G^T lam + G^T mu = 0
    #   G^T lam + s_plus = 1, -G^T lam + s_minus = 1
    Gt = G.T
    Z = np.zeros((n, n))
    A = np.block([
        [Gt, Gt, Z, Z],
        [Gt, np.zeros((n, m)), np.eye(n), Z],
        [-Gt, np.zeros((n, m)), Z, np.eye(n)],
    ])
    b = np.concatenate([np.zeros(n), np.ones(n), np.ones(n)])
    for i in range(n):
        for sign in (1.0, -1.0):
            c = np.zeros(2 * m + 2 * n)
            c[:m] = sign * Gt[i]
            res = lp_solve(LpProblem(c, A, b), tol)
            if res.status is LpStatus.OPTIMAL and res.value > tol.zero:
                d = Gt @ res.x[:m]
                return d / np.abs(d).max()
    return None


def is_pointed(K, tol=DEFAULT_TOL):
    """Decide ``K ∩ (-K) = {0}``; returns a nonzero witness when it fails."""
    if K.kind in ("orthant", "lorentz", "pyramid", "diamond"):
        return PointednessResult(True)
    if K.kind == "halfspaces":
        # {x : Ax >= 0} ∩ {x : Ax <= 0} is the null space of A
        _, s, vt = np.linalg.svd(K.rows)
        rank = int(np.sum(s > tol.zero * max(1.0, s.max())))
        if rank == K.dim:
            return PointednessResult(True)
        w = vt[-1]
        return PointednessResult(False, w / np.abs(w).max())
    witness = _lineality_probe(K.rows, tol)
    if witness is None:
        return PointednessResult(True)
    return PointednessResult(False, witness)


def _require_pointed(K, tol):
    res = is_pointed(K, tol)
    if not res.pointed:
        raise ConeError(
            f"cone is not pointed: contains the line through {np.round(res.witness, 12).tolist()}",
            witness=res.witness)


def interior_dual_direction(K, tol=DEFAULT_TOL):
    """A unit vector ``c`` with ``<c, v> > 0`` for every nonzero ``v`` in ``K``.

    Exists exactly when ``K`` is pointed. Minimizing ``<c, w>`` over a set
    therefore lands on elements that are minimal in the order of ``K``.
    """
    if K.kind in ("orthant",):
        c = np.ones(K.dim)
    elif K.kind in ("lorentz", "pyramid", "diamond"):
        c = np.zeros(K.dim)
        c[-1] = 1.0
    elif K.kind == "halfspaces":
        A = K.rows / np.linalg.norm(K.rows, axis=1, keepdims=True)
        c = A.sum(axis=0)
    else:
        # find c with G c >= 1: variables c+ (n), c- (n), slack (m)
        G = K.rows / np.linalg.norm(K.rows, axis=1, keepdims=True)
        m, n = G.shape
        A = np.hstack([G, -G, -np.eye(m)])
        cost = np.concatenate([-np.ones(2 * n), np.zeros(m)])
        res = lp_solve(LpProblem(cost, A, np.ones(m)), tol)
        if res.status is not LpStatus.OPTIMAL:
            raise ConeError("cone is not pointed; no interior dual direction exists")
        c = res.x[:n] - res.x[n:2 * n]
    return c / np.linalg.norm(c)
