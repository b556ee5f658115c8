"""Set-valued envelopes and LP certificates of minimality.

For a pair ``S ⊆ P`` the envelope sets are

    [x∨y] = {w : w - x in S, w - y in P}
    [x∧y] = {w : x - w in S, y - w in P}

and ``min[x∨y]`` / ``max[x∧y]`` are their minimal / maximal elements in the
order of ``P``. A point ``w`` of ``[x∨y]`` is minimal iff the displacement set

    F = {d in P : w - d in [x∨y]}

is ``{0}``. ``F`` is a bounded polyhedron containing the origin (``P`` is
pointed), so it is ``{0}`` exactly when the ``2n`` linear programs
``max ±d_i over F`` all have optimum zero. That finite test is the
certificate used throughout this module.
"""

from __future__ import annotations

import enum
import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._conic_lp import ConicSystem
from .cones import _check_dim, contains, dual_cone, interior_dual_direction
from .context import GmlsContext, MixedLatticeContext
from .exceptions import (CertificationError, ContextError, ConvergenceError, NotInSetError)
from .numerics import LpStatus
from .projection import project
from .report import PropertyReport, jsonable
from .sampling import cone_boundary_point, cone_point, interior_dual_sample, mixed_vector, rng_from

__all__ = [
    "ExtremalKind",
    "Verdict",
    "ProbeRecord",
    "ExtremalityCertificate",
    "MinSetSample",
    "DetectionResult",
    "RepresentationResult",
    "DualMembershipResult",
    "OracleWarning",
    "in_upper_set",
    "in_lower_set",
    "certify_extremal",
    "sample_min_set",
    "sample_max_set",
    "brute_force_min_set",
    "check_gmls_properties",
    "detect_mixed_lattice",
    "representation_decompose",
    "dual_membership",
    "certify_projection_minimal",
    "orthogonality_maximality",
]

GRID_LIMIT = 10 ** 7
# two certified points count as different when farther apart than this
# multiple of the zero tolerance (relative to scale)
DISTINCT_FACTOR = 100.0
# anchor distance for sampling LPs, in units of the problem scale
ANCHOR_REACH = 10.0


class ExtremalKind(str, enum.Enum):
    MINIMAL = "MinimalInUpperSet"
    MAXIMAL = "MaximalInLowerSet"


class Verdict(str, enum.Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"


class OracleWarning(UserWarning):
    """The grid oracle found nothing inside the requested box."""


@dataclass(frozen=True)
class ProbeRecord:
    direction: np.ndarray
    status: LpStatus
    optimum: float | None

    def to_json(self):
        return {"direction": self.direction.tolist(), "status": self.status.value,
                "optimum": self.optimum}


@dataclass(frozen=True)
class ExtremalityCertificate:
    """LP evidence that ``point`` is (or is not) extremal in an envelope set.

    ``x`` and ``y`` identify the set: ``[x∨y]`` for :attr:`ExtremalKind.MINIMAL`
    and ``[x∧y]`` for :attr:`ExtremalKind.MAXIMAL`.
    """

    point: np.ndarray
    kind: ExtremalKind
    verdict: Verdict
    probes: tuple
    x: np.ndarray
    y: np.ndarray
    witness: np.ndarray | None = None

    @property
    def certified(self):
        return self.verdict is Verdict.CERTIFIED

    @property
    def worst_probe(self):
        vals = [p.optimum for p in self.probes if p.optimum is not None]
        return max(vals) if vals else float("inf")

    def to_json(self):
        out = {
            "point": self.point.tolist(),
            "kind": self.kind.value,
            "verdict": self.verdict.value,
            "probes": [p.to_json() for p in self.probes],
        }
        if self.witness is not None:
            out["witness"] = self.witness.tolist()
        return out


@dataclass
class MinSetSample:
    points: np.ndarray
    certificates: list
    directions: np.ndarray
    refinements: list
    failed_directions: list = field(default_factory=list)

    def to_json(self):
        return {
            "points": self.points.tolist(),
            "directions": self.directions.tolist(),
            "refinements": list(self.refinements),
            "failed_directions": [jsonable(d) for d in self.failed_directions],
            "certificates": [c.to_json() for c in self.certificates],
        }


def _as_gmls(ctx):
    if isinstance(ctx, GmlsContext):
        return ctx
    if isinstance(ctx, MixedLatticeContext):
        return GmlsContext.from_context(ctx)
    raise TypeError(f"expected a context, got {type(ctx).__name__}")


def _vecs(ctx, *vs):
    return [_check_dim(ctx.specific, v) for v in vs]


def _scale(*vs):
    return 1.0 + max(np.linalg.norm(v) for v in vs)


def in_upper_set(ctx, x, y, w):
    """``w ∈ [x∨y]``, i.e. ``w ≽ x`` and ``w ≥ y``."""
    x, y, w = _vecs(ctx, x, y, w)
    return ctx.in_specific(w - x) and ctx.in_initial(w - y)


def in_lower_set(ctx, x, y, w):
    """``w ∈ [x∧y]``, i.e. ``w ≼ x`` and ``w ≤ y``."""
    x, y, w = _vecs(ctx, x, y, w)
    return ctx.in_specific(x - w) and ctx.in_initial(y - w)


def _displacement_system(ctx, x, y, w, kind):
    sys = ConicSystem(ctx.dim, ctx.probe_box, ctx.tol)
    sys.require(ctx.initial, np.zeros(ctx.dim), 1.0)
    if kind is ExtremalKind.MINIMAL:
        # w - d - x in S, w - d - y in P
        sys.require(ctx.specific, w - x, -1.0)
        sys.require(ctx.initial, w - y, -1.0)
    else:
        # x - w - d in S, y - w - d in P
        sys.require(ctx.specific, x - w, -1.0)
        sys.require(ctx.initial, y - w, -1.0)
    return sys


def _witness_ok(ctx, x, y, w, d, kind):
    if not ctx.in_initial(d):
        return False
    if kind is ExtremalKind.MINIMAL:
        return in_upper_set(ctx, x, y, w - d)
    return in_lower_set(ctx, x, y, w + d)


def certify_extremal(ctx, x, y, w, kind=ExtremalKind.MINIMAL):
    """Decide whether ``w`` is minimal in ``[x∨y]`` (or maximal in ``[x∧y]``).

    Parameters
    ----------
    ctx : GmlsContext or MixedLatticeContext
    x, y, w : array_like
    kind : ExtremalKind or str

    Returns
    -------
    ExtremalityCertificate
        ``Certified`` when all ``2n`` probe optima are at most
        ``zero * scale``; otherwise ``Refuted`` with the displacement ``d``
        from the largest probe as witness (``w - d`` resp. ``w + d`` stays in
        the set and ``d`` is a nonzero element of ``P``).
    """
    ctx = _as_gmls(ctx)
    kind = ExtremalKind(kind)
    x, y, w = _vecs(ctx, x, y, w)
    member = in_upper_set if kind is ExtremalKind.MINIMAL else in_lower_set
    if not member(ctx, x, y, w):
        raise NotInSetError(f"point {w.tolist()} is not in the envelope set")

    n = ctx.dim
    threshold = ctx.tol.zero * _scale(x, y, w)
    sys = _displacement_system(ctx, x, y, w, kind)
    probes = []
    best = None
    for i, sign in itertools.product(range(n), (1.0, -1.0)):
        c = np.zeros(n)
        c[i] = sign
        sol = sys.maximize(c, stop_at=threshold)
        probes.append(ProbeRecord(c, sol.status, sol.value))
        if sol.status is LpStatus.OPTIMAL and sol.value > threshold:
            if best is None or sol.value > best[0]:
                best = (sol.value, sol.z)
        elif sol.status is LpStatus.INFEASIBLE:
            raise ConvergenceError("displacement LP infeasible although d = 0 is feasible")
    if best is None:
        return ExtremalityCertificate(w, kind, Verdict.CERTIFIED, tuple(probes), x, y)
    d = best[1]
    if not _witness_ok(ctx, x, y, w, d, kind):
        raise ConvergenceError("refutation witness failed independent re-verification")
    return ExtremalityCertificate(w, kind, Verdict.REFUTED, tuple(probes), x, y, d)


def _extremal_lp(ctx, x, y, c, kind, extra=(), anchor=None):
    """Optimize ``<c, w>`` over the envelope set (min for upper, max for lower).

    ``anchor`` adds ``w ≤ anchor`` (upper sets) or ``w ≥ anchor`` (lower
    sets), which keeps the LP bounded for directions outside ``P*``.
    """
    sys = ConicSystem(ctx.dim, ctx.probe_box, ctx.tol)
    if kind is ExtremalKind.MINIMAL:
        sys.require(ctx.specific, -x, 1.0)
        sys.require(ctx.initial, -y, 1.0)
        if anchor is not None:
            sys.require(ctx.initial, anchor, -1.0)
        obj = -np.asarray(c, dtype=float)
    else:
        sys.require(ctx.specific, x, -1.0)
        sys.require(ctx.initial, y, -1.0)
        if anchor is not None:
            sys.require(ctx.initial, -anchor, 1.0)
        obj = np.asarray(c, dtype=float)
    for cone, base, sign in extra:
        sys.require(cone, base, sign)
    sol = sys.maximize(obj)
    if sol.status is not LpStatus.OPTIMAL:
        return None
    return sol.z


def _anchor(ctx, x, y, kind):
    """Point far above (below) one extremal element, along an interior ray of ``P``.

    Every extremal element of the envelope set that is comparable to the
    anchor is reachable by an anchored LP; nothing is fetched from the box.
    """
    base = _extremal_lp(ctx, x, y, interior_dual_direction(ctx.initial, ctx.tol), kind)
    if base is None:
        return None
    g = interior_dual_direction(dual_cone(ctx.initial), ctx.tol)
    reach = ANCHOR_REACH * (1.0 + np.linalg.norm(x) + np.linalg.norm(y) + np.linalg.norm(base))
    return base + reach * g if kind is ExtremalKind.MINIMAL else base - reach * g


def _refine(ctx, x, y, w, kind, max_refine):
    """Witness descent: step along refutation witnesses until certified."""
    step = -1.0 if kind is ExtremalKind.MINIMAL else 1.0
    for it in range(max_refine + 1):
        cert = certify_extremal(ctx, x, y, w, kind)
        if cert.certified:
            return cert, it
        w = w + step * cert.witness
    return None, max_refine


def _default_directions(ctx):
    P = ctx.initial
    dirs = []
    G = P.generators
    if G is not None:
        dirs += list(G)
    dirs += list(np.eye(ctx.dim))
    D = dual_cone(P).generators
    if D is not None:
        dirs += list(D)
    dirs.append(interior_dual_direction(P, ctx.tol))
    return np.array(dirs, dtype=float)


def _snap(ctx, x, y, cert, scale):
    """Replace a certified point by its rounding when that is certified too.

    LP round-off leaves integral extremal points a few ulps off; the rounded
    point is kept only if it lies within zero tolerance and passes its own
    certificate, so snapping never asserts anything unproved.
    """
    w = cert.point
    r = np.round(w) + 0.0
    if np.array_equal(r, w) or np.linalg.norm(r - w) > ctx.tol.zero * scale:
        return cert
    inside = in_upper_set if cert.kind is ExtremalKind.MINIMAL else in_lower_set
    if not inside(ctx, x, y, r):
        return cert
    snapped = certify_extremal(ctx, x, y, r, cert.kind)
    return snapped if snapped.certified else cert


def _sample_extremal_set(ctx, x, y, directions, max_refine, kind):
    ctx = _as_gmls(ctx)
    x, y = _vecs(ctx, x, y)
    directions = _default_directions(ctx) if directions is None else np.atleast_2d(
        np.asarray(directions, dtype=float))
    if directions.size == 0:
        raise ValueError("at least one direction is required")
    scale = _scale(x, y)
    dedup = ctx.tol.zero * scale
    points, certs, refinements, failed = [], [], [], []
    Pd = dual_cone(ctx.initial)
    anchor = None
    for c in directions:
        if contains(Pd, c, ctx.tol):
            w = _extremal_lp(ctx, x, y, c, kind)
        else:
            if anchor is None:
                anchor = _anchor(ctx, x, y, kind)
            w = None if anchor is None else _extremal_lp(ctx, x, y, c, kind, anchor=anchor)
        if w is None:
            failed.append({"direction": c, "reason": "envelope set LP not optimal"})
            continue
        cert, its = _refine(ctx, x, y, w, kind, max_refine)
        if cert is None:
            failed.append({"direction": c, "reason": f"not certified after {max_refine} steps"})
            continue
        cert = _snap(ctx, x, y, cert, scale)
        p = cert.point
        if any(np.linalg.norm(p - q) <= dedup for q in points):
            continue
        points.append(p)
        certs.append(cert)
        refinements.append(its)
    pts = np.array(points) if points else np.zeros((0, ctx.dim))
    return MinSetSample(pts, certs, directions, refinements, failed)


def sample_min_set(ctx, x, y, directions=None, max_refine=50):
    """Certified sample of ``min[x∨y]``.

    For each direction ``c`` the LP ``min <c, w>`` over ``[x∨y]`` (boxed by
    ``ctx.probe_box``) gives a starting point, which is pushed down along
    refutation witnesses until :func:`certify_extremal` certifies it.
    Directions that do not certify within ``max_refine`` steps are listed in
    ``failed_directions``; the others are still returned.
    """
    return _sample_extremal_set(ctx, x, y, directions, max_refine, ExtremalKind.MINIMAL)


def sample_max_set(ctx, x, y, directions=None, max_refine=50):
    """Certified sample of ``max[x∧y]`` (mirror of :func:`sample_min_set`)."""
    return _sample_extremal_set(ctx, x, y, directions, max_refine, ExtremalKind.MAXIMAL)


def _exact_rows(K):
    A = K.halfspaces
    if A is None or not np.all(A == np.round(A)):
        return None
    return np.round(A).astype(np.int64)


def brute_force_min_set(ctx, x, y, box, step=1.0):
    """Grid oracle for ``min[x∨y]``.

    Enumerates ``box`` (a sequence of ``(lo, hi)`` bounds) with spacing
    ``step``, keeps the points of ``[x∨y]`` and removes every point that has
    another kept point below it in the order of ``P``. Integer data with
    integral halfspace rows is handled in exact integer arithmetic.

    Returns
    -------
    numpy.ndarray
        Survivors, shape ``(k, n)``, sorted lexicographically. An empty
        result triggers an :class:`OracleWarning`.
    """
    ctx = _as_gmls(ctx)
    x, y = _vecs(ctx, x, y)
    box = np.asarray(box, dtype=float)
    n = ctx.dim
    if box.shape != (n, 2) or np.any(box[:, 1] < box[:, 0]):
        raise ValueError(f"box must be {n} (lo, hi) pairs with lo <= hi")
    if not step > 0:
        raise ValueError("step must be positive")
    counts = np.floor((box[:, 1] - box[:, 0]) / step + 1e-9).astype(np.int64) + 1
    if float(np.prod(counts.astype(float))) > GRID_LIMIT:
        raise ValueError(f"grid of {int(np.prod(counts))} points exceeds {GRID_LIMIT}")

    AS, AP = _exact_rows(ctx.specific), _exact_rows(ctx.initial)
    integral = (AS is not None and AP is not None and float(step).is_integer()
                and all(np.all(v == np.round(v)) for v in (x, y, box)))
    axes = [np.arange(k) for k in counts]
    idx = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    if integral:
        W = np.round(box[:, 0]).astype(np.int64) + idx * int(step)
        xi, yi = np.round(x).astype(np.int64), np.round(y).astype(np.int64)
        keep = np.all((W - xi) @ AS.T >= 0, axis=1) & np.all((W - yi) @ AP.T >= 0, axis=1)
        W = W[keep]
        diff = W[:, None, :] - W[None, :, :]
        below = np.all(diff @ AP.T >= 0, axis=2)
        np.fill_diagonal(below, False)
        survivors = W[~below.any(axis=1)].astype(float)
    else:
        W = box[:, 0] + idx * step
        W = np.array([w for w in W if in_upper_set(ctx, x, y, w)]).reshape(-1, n)
        alive = []
        for i, w in enumerate(W):
            dominated = any(j != i and np.linalg.norm(w - v) > 0 and ctx.in_initial(w - v)
                            for j, v in enumerate(W))
            if not dominated:
                alive.append(w)
        survivors = np.array(alive).reshape(-1, n)
    if survivors.shape[0] == 0:
        warnings.warn("no grid point of the envelope set lies in the box", OracleWarning)
    order = np.lexsort(survivors.T[::-1]) if survivors.shape[0] else []
    return survivors[order]


@dataclass(frozen=True)
class DetectionResult:
    verdict: str  # "NotMixedLattice" | "NoWitnessFound"
    samples: int
    witness: dict | None = None

    @property
    def is_mixed_lattice_refuted(self):
        return self.verdict == "NotMixedLattice"

    def to_json(self):
        out = {"verdict": self.verdict, "samples": self.samples}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        return out


def _detect_directions(ctx, rng, extra):
    P = ctx.initial
    dirs = [interior_dual_direction(P, ctx.tol)]
    D = dual_cone(P).generators
    if D is not None:
        dirs += list(D)
    dirs += [interior_dual_sample(P, rng) for _ in range(extra)]
    return dirs


def _distinct_minima(ctx, x, y, directions, max_refine=50):
    """Certified minimal points from ``directions``; skips repeats cheaply."""
    scale = _scale(x, y)
    sep = DISTINCT_FACTOR * ctx.tol.zero * scale
    found = []
    for c in directions:
        w = _extremal_lp(ctx, x, y, c, ExtremalKind.MINIMAL)
        if w is None or any(np.linalg.norm(w - q) <= sep for q in found):
            continue
        cert, _ = _refine(ctx, x, y, w, ExtremalKind.MINIMAL, max_refine)
        if cert is None:
            continue
        cert = _snap(ctx, x, y, cert, scale)
        if all(np.linalg.norm(cert.point - q) > sep for q in found):
            found.append(cert.point)
    return found


def detect_mixed_lattice(ctx, sample_count=500, seed=0, candidates=()):
    """Search for two distinct minimal elements of one envelope set.

    A hit proves that the context is not a mixed lattice space (the envelope
    ``x∨y`` is not unique). Pairs in ``candidates`` are tried before the
    ``sample_count`` random pairs. ``NoWitnessFound`` is inconclusive: it is
    the outcome of a finite search, not a proof.
    """
    ctx = _as_gmls(ctx)
    rng = rng_from(seed)
    pairs = [tuple(np.asarray(v, dtype=float) for v in p) for p in candidates]
    pairs += [(mixed_vector(ctx.initial, rng), mixed_vector(ctx.initial, rng))
              for _ in range(sample_count)]
    for k, (x, y) in enumerate(pairs, start=1):
        x, y = _vecs(ctx, x, y)
        found = _distinct_minima(ctx, x, y, _detect_directions(ctx, rng, 2))
        if len(found) >= 2:
            F = np.array(found)
            D = np.linalg.norm(F[:, None, :] - F[None, :, :], axis=2)
            i, j = np.unravel_index(np.argmax(D), D.shape)
            u1, u2 = sorted([F[i], F[j]], key=lambda v: tuple(v))
            c1 = certify_extremal(ctx, x, y, u1)
            c2 = certify_extremal(ctx, x, y, u2)
            if c1.certified and c2.certified:
                return DetectionResult("NotMixedLattice", k, {
                    "x": x, "y": y, "u1": u1, "u2": u2,
                    "certificates": [c1.to_json(), c2.to_json()]})
    return DetectionResult("NoWitnessFound", len(pairs))


@dataclass(frozen=True)
class RepresentationResult:
    upper: np.ndarray
    lower: np.ndarray
    lower_certificate: ExtremalityCertificate
    zero_max_certificate: ExtremalityCertificate

    def to_json(self):
        return {"u": self.upper.tolist(), "w": self.lower.tolist(),
                "w_minimal": self.lower_certificate.to_json(),
                "zero_maximal": self.zero_max_certificate.to_json()}


def representation_decompose(ctx, x, u, w=None):
    """Split ``x = u - w`` with ``u ∈ min[x∨0]`` and ``w ∈ min[0∨(-x)]``.

    Without ``w`` this is the forward direction: ``u`` must be certified
    minimal in ``[x∨0]``; then ``w = u - x`` is certified minimal in
    ``[0∨(-x)]`` and ``0`` is certified maximal in ``[w∧u]``, i.e.
    ``P ∩ max[w∧u] = {0}``.

    With ``w`` given, the converse is checked: ``x = u - w`` and
    ``0 ∈ max[w∧u]`` must hold, and then both minimality claims follow and
    are certified too.

    Raises
    ------
    CertificationError
        When any certificate is refuted; the refuted certificate is attached.
    """
    ctx = _as_gmls(ctx)
    x, u = _vecs(ctx, x, u)
    zero = np.zeros(ctx.dim)
    converse = w is not None
    if not converse:
        cu = certify_extremal(ctx, x, zero, u)
        if not cu.certified:
            raise CertificationError("u is not minimal in [x∨0]", certificate=cu,
                                     witness=cu.witness)
        w = u - x
    else:
        (w,) = _vecs(ctx, w)
        if np.linalg.norm(u - w - x) > ctx.tol.feas * _scale(x, u, w):
            raise ValueError("x must equal u - w")
    if not in_lower_set(ctx, w, u, zero):
        raise CertificationError("0 is not in [w∧u] (need w in S and u in P)")
    zc = certify_extremal(ctx, w, u, zero, ExtremalKind.MAXIMAL)
    if not zc.certified:
        raise CertificationError("0 is not maximal in [w∧u]; not a valid representation",
                                 certificate=zc, witness=zc.witness)
    wc = certify_extremal(ctx, zero, -x, w)
    if not wc.certified:
        raise CertificationError("w is not minimal in [0∨(-x)]", certificate=wc,
                                 witness=wc.witness)
    if converse:
        uc = certify_extremal(ctx, x, zero, u)
        if not uc.certified:
            raise CertificationError("u is not minimal in [x∨0]", certificate=uc,
                                     witness=uc.witness)
    return RepresentationResult(u, w, wc, zc)


@dataclass(frozen=True)
class DualMembershipResult:
    side: str
    member: bool
    evidence: list

    def __bool__(self):
        return self.member

    def to_json(self):
        return {"side": self.side, "member": self.member, "evidence": jsonable(self.evidence)}


def _nonneg_lower_point_exists(ctx, a, b):
    """Is ``P ∩ [a∧b]`` nonempty?"""
    sys = ConicSystem(ctx.dim, ctx.probe_box, ctx.tol)
    sys.require(ctx.initial, np.zeros(ctx.dim), 1.0)
    sys.require(ctx.specific, a, -1.0)
    sys.require(ctx.initial, b, -1.0)
    return sys.feasible()


def dual_membership(ctx, y, side="RightDualOfS", probe_count=50, seed=0):
    """Membership in the order-theoretic duals of ``S`` and ``P``.

    ``side="RightDualOfS"`` asks whether ``P ∩ [x∧y]`` is nonempty for every
    ``x ∈ S``; ``side="LeftDualOfP"`` whether ``P ∩ [y∧z]`` is nonempty for
    every ``z ∈ P``. The answer comes from the characterization (right dual
    of ``S`` is ``P``, left dual of ``P`` is ``S``); ``probe_count`` random
    elements (plus the origin) are checked by LP feasibility as evidence.

    Raises
    ------
    CertificationError
        If the LP evidence contradicts the characterization.
    """
    ctx = _as_gmls(ctx)
    (y,) = _vecs(ctx, y)
    rng = rng_from(seed)
    if side == "RightDualOfS":
        member = ctx.in_initial(y)
        probe_cone = ctx.specific
    elif side == "LeftDualOfP":
        member = ctx.in_specific(y)
        probe_cone = ctx.initial
    else:
        raise ValueError("side must be 'RightDualOfS' or 'LeftDualOfP'")
    others = [np.zeros(ctx.dim)]
    others += [(cone_point if k % 2 else cone_boundary_point)(probe_cone, rng)
               for k in range(probe_count)]
    evidence = []
    for v in others:
        ok = (_nonneg_lower_point_exists(ctx, v, y) if side == "RightDualOfS"
              else _nonneg_lower_point_exists(ctx, y, v))
        evidence.append({"probe": v, "nonnegative_lower_point": ok})
    all_ok = all(e["nonnegative_lower_point"] for e in evidence)
    if all_ok != member:
        raise CertificationError(
            f"{side}: characterization says {member} but LP evidence says {all_ok}")
    return DualMembershipResult(side, member, evidence)


def certify_projection_minimal(ctx, x):
    """Certify that ``P_S x`` is a minimal element of ``[0∨x]``.

    Needs a projection-realized context (``P`` is the dual of ``S``).

    Raises
    ------
    CertificationError
        If the LP probes refute minimality.
    """
    ctx = _as_gmls(ctx)
    ctx.require_realized("certify_projection_minimal")
    (x,) = _vecs(ctx, x)
    p = project(ctx.specific, x, ctx.tol).point
    cert = certify_extremal(ctx, np.zeros(ctx.dim), x, p)
    if not cert.certified:
        raise CertificationError("projection refuted as minimal element",
                                 certificate=cert, witness=cert.witness)
    return cert


def orthogonality_maximality(ctx, x, y):
    """For ``x ∈ S``, ``y ∈ P`` with ``<x, y> = 0``, certify ``0 ∈ max[x∧y]``."""
    ctx = _as_gmls(ctx)
    x, y = _vecs(ctx, x, y)
    scale = _scale(x, y)
    if not ctx.in_specific(x):
        raise ContextError("x must lie in the specific cone")
    if not ctx.in_initial(y):
        raise ContextError("y must lie in the initial cone")
    if abs(float(x @ y)) > ctx.tol.feas * scale ** 2:
        raise ContextError(f"x and y are not orthogonal (<x, y> = {float(x @ y):.3e})")
    cert = certify_extremal(ctx, x, y, np.zeros(ctx.dim), ExtremalKind.MAXIMAL)
    if not cert.certified:
        raise CertificationError("0 refuted as maximal element of [x∧y]",
                                 certificate=cert, witness=cert.witness)
    return cert


# --------------------------------------------------------------------------
# identity checker for the set-valued layer

_CLAUSES = {
    "a": "min[x∨y] = -max[(-x)∧(-y)]",
    "b": "u ∈ min[x∨y] pairs with x+y-u ∈ max[y∧x] and conversely",
    "c": "min[(z+x)∨(z+y)] = z + min[x∨y]",
    "d": "max[(z+x)∧(z+y)] = z + max[x∧y]",
    "e": "x ≼ w, y ≤ z: extremal points of one set dominate/are dominated in the other",
    "f": "x ≤ y  <=>  max[x∧y] = {x}  <=>  min[y∨x] = {y}",
    "g": "x ≼ y  <=>  max[y∧x] = {x}  <=>  min[x∨y] = {y}",
    "h": "a >= 0: min[(ax)∨(ay)] = a min[x∨y], max[(ax)∧(ay)] = a max[x∧y]",
    "i": "a < 0: max[(ax)∧(ay)] = a min[x∨y], min[(ax)∨(ay)] = a max[x∧y]",
}


def _one_extremal(ctx, x, y, c, kind):
    w = _extremal_lp(ctx, x, y, c, kind)
    if w is None:
        return None
    cert, _ = _refine(ctx, x, y, w, kind, 50)
    return None if cert is None else cert.point


def _certified(ctx, x, y, w, kind):
    """``(ok, worst probe)``; points outside the set count as failures."""
    try:
        cert = certify_extremal(ctx, x, y, w, kind)
    except NotInSetError:
        return False, float("inf")
    return cert.certified, cert.worst_probe


def check_gmls_properties(ctx, sample_count=100, seed=0):
    """Sampled check of the basic set-valued envelope identities.

    For every sample, extremal points are produced by LP (direction drawn
    from the interior of ``P*``), certified, and pushed through each clause;
    the transformed points must again carry ``Certified`` certificates.
    Every clause is asserted.
    """
    ctx = _as_gmls(ctx)
    rng = rng_from(seed)
    MIN, MAX = ExtremalKind.MINIMAL, ExtremalKind.MAXIMAL
    S, P = ctx.specific, ctx.initial
    rep = PropertyReport("generalized mixed lattice structure", ctx.label,
                         meta={"samples": sample_count, "seed": seed})
    recs = {k: rep.add(k, v) for k, v in _CLAUSES.items()}
    cstar = interior_dual_direction(P, ctx.tol)
    zero = np.zeros(ctx.dim)

    def check_cert(rec, x, y, w, kind, **ex):
        ok, worst = _certified(ctx, x, y, w, kind)
        rec.check_bool(ok, worst if np.isfinite(worst) else 0.0, x=x, y=y, point=w,
                       kind=kind.value, **ex)
        return ok

    for _ in range(sample_count):
        x, y, z = (mixed_vector(P, rng) for _ in range(3))
        c = interior_dual_sample(P, rng)
        u = _one_extremal(ctx, x, y, c, MIN)
        v = _one_extremal(ctx, x, y, c, MAX)
        if u is None or v is None:
            for k in "abcdhi":
                recs[k].check_bool(False, x=x, y=y, reason="no extremal point produced")
            continue

        # (a) negation duality, both inclusions
        check_cert(recs["a"], -x, -y, -u, MAX)
        vneg = _one_extremal(ctx, -x, -y, c, MAX)
        check_cert(recs["a"], x, y, -vneg, MIN)

        # (b) complementary pairs
        check_cert(recs["b"], y, x, x + y - u, MAX)
        wb = _one_extremal(ctx, y, x, c, MAX)
        check_cert(recs["b"], x, y, x + y - wb, MIN)

        # (c), (d) translation, both inclusions
        check_cert(recs["c"], x + z, y + z, u + z, MIN)
        ut = _one_extremal(ctx, x + z, y + z, cstar, MIN)
        check_cert(recs["c"], x, y, ut - z, MIN, z=z)
        check_cert(recs["d"], x + z, y + z, v + z, MAX)
        vt = _one_extremal(ctx, x + z, y + z, cstar, MAX)
        check_cert(recs["d"], x, y, vt - z, MAX, z=z)

        # (e) x ≼ w, y ≤ zz; lower sets then upper sets
        w = x + cone_point(S, rng)
        zz = y + cone_point(P, rng)
        sys_v = _extremal_lp(ctx, w, zz, cstar, MAX, extra=[(P, -v, 1.0)])
        if sys_v is None:
            recs["e"].check_bool(False, x=x, y=y, w=w, z=zz, reason="no dominating point")
        else:
            cert, _ = _refine(ctx, w, zz, sys_v, MAX, 50)
            ok = cert is not None and ctx.in_initial(cert.point - v)
            recs["e"].check_bool(ok, x=x, y=y, w=w, z=zz, u=v)
        ve = _one_extremal(ctx, w, zz, cstar, MIN)
        sys_u = None if ve is None else _extremal_lp(ctx, x, y, cstar, MIN, extra=[(P, ve, -1.0)])
        if sys_u is None:
            recs["e"].check_bool(False, x=x, y=y, w=w, z=zz, reason="no dominated point")
        else:
            cert, _ = _refine(ctx, x, y, sys_u, MIN, 50)
            ok = cert is not None and ctx.in_initial(ve - cert.point)
            recs["e"].check_bool(ok, x=x, y=y, w=w, z=zz, v=ve)

        # (f) x ≤ yy: singletons, plus the converse on the random pair
        yy = x + (cone_boundary_point if rng.random() < 0.5 else cone_point)(P, rng)
        check_cert(recs["f"], x, yy, x, MAX)
        check_cert(recs["f"], yy, x, yy, MIN)
        lone = _one_extremal(ctx, yy, x, interior_dual_sample(P, rng), MIN)
        recs["f"].check_bool(lone is not None and np.linalg.norm(lone - yy) <= ctx.tol.zero
                             * _scale(x, yy) * DISTINCT_FACTOR, x=x, y=yy)
        recs["f"].check_bool(in_upper_set(ctx, y, x, y) == ctx.in_initial(y - x), x=x, y=y)

        # (g) x ≼ ys
        ys = x + (cone_boundary_point if rng.random() < 0.5 else cone_point)(S, rng)
        check_cert(recs["g"], ys, x, x, MAX)
        check_cert(recs["g"], x, ys, ys, MIN)
        lone = _one_extremal(ctx, x, ys, interior_dual_sample(P, rng), MIN)
        recs["g"].check_bool(lone is not None and np.linalg.norm(lone - ys) <= ctx.tol.zero
                             * _scale(x, ys) * DISTINCT_FACTOR, x=x, y=ys)
        recs["g"].check_bool(in_upper_set(ctx, x, y, y) == ctx.in_specific(y - x), x=x, y=y)

        # (h) nonnegative scaling (a = 0 included now and then)
        a = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.1, 5.0))
        check_cert(recs["h"], a * x, a * y, a * u, MIN, a=a)
        check_cert(recs["h"], a * x, a * y, a * v, MAX, a=a)

        # (i) negative scaling swaps the two sets
        a = -float(rng.uniform(0.1, 5.0))
        check_cert(recs["i"], a * x, a * y, a * u, MAX, a=a)
        check_cert(recs["i"], a * x, a * y, a * v, MIN, a=a)
    return rep
