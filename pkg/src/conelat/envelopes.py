"""Mixed envelopes from a single cone projection.

In a projection-realized context (``P`` is the dual of ``S``)

    x∨y = x + P_S(y - x)        x∧y = x - P_S(x - y)

and the parts of ``x`` are the envelopes against the origin. Everything here
is closed form plus verification; the LP side lives in :mod:`conelat.gmls`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .context import GmlsContext
from .exceptions import CertificationError
from .projection import project, project_translated
from .report import PropertyReport
from .sampling import cone_boundary_point, cone_point, mixed_vector, rng_from

__all__ = [
    "DecompositionResult",
    "Parts",
    "LatticeOps",
    "upper_envelope",
    "lower_envelope",
    "parts",
    "moreau_decompose",
    "lattice_like_ops",
    "check_envelope_identities",
    "check_part_identities",
]


class Parts(NamedTuple):
    upper: np.ndarray  # x∨0
    specific_upper: np.ndarray  # 0∨x
    lower: np.ndarray  # (-x)∨0
    specific_lower: np.ndarray  # 0∨(-x)


class LatticeOps(NamedTuple):
    join: np.ndarray  # x∨y
    meet: np.ndarray  # x∧y
    dual_join: np.ndarray  # y∨x
    dual_meet: np.ndarray  # y∧x


@dataclass(frozen=True)
class DecompositionResult:
    """``x = specific_upper - lower`` with the two parts orthogonal."""

    specific_upper: np.ndarray
    lower: np.ndarray
    reconstruction_residual: float
    orthogonality_residual: float

    def to_json(self):
        return {
            "specific_upper": self.specific_upper.tolist(),
            "lower": self.lower.tolist(),
            "reconstruction_residual": self.reconstruction_residual,
            "orthogonality_residual": self.orthogonality_residual,
        }


def _vec(ctx, v):
    from .cones import _check_dim

    return _check_dim(ctx.specific, v)


def _scale(*vs):
    return 1.0 + sum(float(np.linalg.norm(v)) for v in vs)


def _proj(ctx, v):
    return project(ctx.specific, v, ctx.tol).point


def upper_envelope(ctx, x, y):
    """Mixed upper envelope ``x∨y``: the least ``w`` with ``w ≽ x`` and ``w ≥ y``.

    Examples
    --------
    >>> from conelat import ConeSpec, MixedLatticeContext
    >>> ctx = MixedLatticeContext(ConeSpec.orthant(2))
    >>> upper_envelope(ctx, [1, 5], [3, 2]).tolist()
    [3.0, 5.0]
    """
    ctx.require_realized("upper_envelope")
    x, y = _vec(ctx, x), _vec(ctx, y)
    w = x + _proj(ctx, y - x)
    if not (ctx.in_specific(w - x) and ctx.in_initial(w - y)):
        raise CertificationError(
            "upper envelope fails its bounds",
            residuals={"specific": ctx.specific_violation(w - x),
                       "initial": ctx.initial_violation(w - y)})
    return w


def lower_envelope(ctx, x, y):
    """Mixed lower envelope ``x∧y``: the greatest ``w`` with ``w ≼ x`` and ``w ≤ y``."""
    ctx.require_realized("lower_envelope")
    x, y = _vec(ctx, x), _vec(ctx, y)
    w = x - _proj(ctx, x - y)
    if not (ctx.in_specific(x - w) and ctx.in_initial(y - w)):
        raise CertificationError(
            "lower envelope fails its bounds",
            residuals={"specific": ctx.specific_violation(x - w),
                       "initial": ctx.initial_violation(y - w)})
    return w


def parts(ctx, x):
    """Upper, specific upper, lower and specific lower parts of ``x``.

    Two projections (of ``x`` and ``-x``) give all four, so
    ``x = specific_upper - lower = upper - specific_lower`` holds up to
    rounding of a single subtraction.
    """
    ctx.require_realized("parts")
    x = _vec(ctx, x)
    su = _proj(ctx, x)
    sl = _proj(ctx, -x)
    return Parts(upper=x + sl, specific_upper=su, lower=su - x, specific_lower=sl)


def moreau_decompose(ctx, x):
    """Order form of Moreau's decomposition: ``x = P_S x - P_P(-x)``.

    The two parts come from independent projections (onto ``S`` and onto
    ``P``), so the reconstruction and orthogonality residuals are genuine
    checks rather than identities.

    Raises
    ------
    CertificationError
        If a part leaves its cone, a residual exceeds its bound, or
        ``P_S x = 0`` disagrees with the membership test ``-x ∈ P``.
    """
    ctx.require_realized("moreau_decompose")
    x = _vec(ctx, x)
    plus = _proj(ctx, x)
    minus = project(ctx.initial, -x, ctx.tol).point
    scale = _scale(x)
    recon = float(np.linalg.norm(x - (plus - minus)))
    orth = abs(float(plus @ minus))
    res = {"reconstruction": recon, "orthogonality": orth,
           "specific_upper_membership": ctx.specific_violation(plus),
           "lower_membership": ctx.initial_violation(minus)}
    if not (ctx.in_specific(plus) and ctx.in_initial(minus)):
        raise CertificationError("Moreau part left its cone", residuals=res)
    if recon > ctx.tol.feas * scale or orth > ctx.tol.feas * scale ** 2:
        raise CertificationError("Moreau residuals exceed tolerance", residuals=res)
    zero_plus = float(np.linalg.norm(plus)) <= ctx.tol.feas * scale
    if zero_plus != ctx.in_initial(-x):
        raise CertificationError("P_S x = 0 disagrees with -x ∈ P", residuals=res)
    return DecompositionResult(plus, minus, recon, orth)


def lattice_like_ops(ctx, x, y):
    """The four translated-cone projections, cross-checked against envelopes.

    ``join`` and ``meet`` come from projections onto ``S``; ``dual_join`` and
    ``dual_meet`` are computed from projections onto ``P`` and must agree
    with ``y∨x`` and ``y∧x``.
    """
    ctx.require_realized("lattice_like_ops")
    x, y = _vec(ctx, x), _vec(ctx, y)
    join = upper_envelope(ctx, x, y)
    meet = lower_envelope(ctx, x, y)
    P = ctx.initial
    dual_join = project_translated(P, x, y, ctx.tol)
    dual_meet = x - project(P, x - y, ctx.tol).point
    bound = ctx.tol.feas * _scale(x, y)
    res = {"join": float(np.linalg.norm(join - project_translated(ctx.specific, x, y, ctx.tol))),
           "dual_join": float(np.linalg.norm(dual_join - upper_envelope(ctx, y, x))),
           "dual_meet": float(np.linalg.norm(dual_meet - lower_envelope(ctx, y, x)))}
    if max(res.values()) > bound:
        raise CertificationError("lattice-like operations disagree with envelopes",
                                 residuals=res)
    return LatticeOps(join, meet, dual_join, dual_meet)


# --------------------------------------------------------------------------
# identity checkers

_ENVELOPE_CLAUSES = {
    "a": "x∨y + y∧x = x + y",
    "b": "z + x∨y = (x+z)∨(y+z), z + x∧y = (x+z)∧(y+z)",
    "c": "x∨y = -((-x)∧(-y))",
    "d": "x ≼ u, y ≤ v  =>  x∨y ≤ u∨v, x∧y ≤ u∧v",
    "e": "x ≤ y  <=>  y∨x = y  <=>  x∧y = x",
    "f": "x ≼ y  <=>  x∨y = y  <=>  y∧x = x",
    "g": "a >= 0: (ax)∨(ay) = a(x∨y), (ax)∧(ay) = a(x∧y)",
    "h": "a < 0: (ax)∨(ay) = a(x∧y), (ax)∧(ay) = a(x∨y)",
    "i": "x ≼ y  =>  z∨x ≼ z∨y, z∧x ≼ z∧y",
    "j": "u ≼ x ≼ z, u ≼ y ≼ z  =>  x∨y ≼ z, u ≼ x∧y",
}
_ALWAYS_ASSERTED = set("abcefgh")
_I_NOTE = ("second half read as z∧x ≼ z∧y; the source statement repeats "
           "z∧y on both sides")


def _comparable(K, x, rng):
    step = cone_boundary_point(K, rng) if rng.random() < 0.5 else cone_point(K, rng)
    return x + step


def check_envelope_identities(ctx, sample_count=200, seed=0):
    """Sampled check of the envelope identities, clause by clause.

    Clauses (a)–(c) and (e)–(h) are asserted in every projection-realized
    context. (d), (i) and (j) hold in mixed lattice spaces; outside the
    orthant case they are recorded with counterexamples but not asserted.
    """
    ctx.require_realized("check_envelope_identities")
    rng = rng_from(seed)
    S, P = ctx.specific, ctx.initial
    up = lambda a, b: upper_envelope(ctx, a, b)  # noqa: E731
    lo = lambda a, b: lower_envelope(ctx, a, b)  # noqa: E731
    rep = PropertyReport("mixed envelope identities", ctx.label,
                         meta={"samples": sample_count, "seed": seed})
    recs = {}
    for k, desc in _ENVELOPE_CLAUSES.items():
        asserted = ctx.lattice or k in _ALWAYS_ASSERTED
        recs[k] = rep.add(k, desc, asserted, note=_I_NOTE if k == "i" else "")
    feas = ctx.tol.feas

    def eq(rec, lhs, rhs, scale, **ex):
        rec.check(float(np.linalg.norm(lhs - rhs)), feas * scale, **ex)

    def order(rec, in_cone, violation, diff, **ex):
        rec.check_bool(in_cone(diff), violation(diff), **ex)

    for _ in range(sample_count):
        x, y, z = (mixed_vector(P, rng) for _ in range(3))
        sc = _scale(x, y, z)
        j, m = up(x, y), lo(y, x)
        eq(recs["a"], j + m, x + y, sc, x=x, y=y)

        eq(recs["b"], z + j, up(x + z, y + z), sc, x=x, y=y, z=z)
        eq(recs["b"], z + lo(x, y), lo(x + z, y + z), sc, x=x, y=y, z=z)

        eq(recs["c"], j, -lo(-x, -y), sc, x=x, y=y)

        u = _comparable(S, x, rng)
        v = _comparable(P, y, rng)
        order(recs["d"], ctx.in_initial, ctx.initial_violation, up(u, v) - j,
              x=x, y=y, u=u, v=v, side="upper")
        order(recs["d"], ctx.in_initial, ctx.initial_violation, lo(u, v) - lo(x, y),
              x=x, y=y, u=u, v=v, side="lower")

        # (e), (f): constructed comparable pairs and the raw random pair
        yp = _comparable(P, x, rng)
        se = _scale(x, yp)
        eq(recs["e"], up(yp, x), yp, se, x=x, y=yp)
        eq(recs["e"], lo(x, yp), x, se, x=x, y=yp)
        le = ctx.in_initial(y - x)
        recs["e"].check_bool(le == _close(up(y, x), y, feas * sc)
                             == _close(lo(x, y), x, feas * sc), x=x, y=y)
        ys = _comparable(S, x, rng)
        sf = _scale(x, ys)
        eq(recs["f"], up(x, ys), ys, sf, x=x, y=ys)
        eq(recs["f"], lo(ys, x), x, sf, x=x, y=ys)
        ls = ctx.in_specific(y - x)
        recs["f"].check_bool(ls == _close(up(x, y), y, feas * sc)
                             == _close(lo(y, x), x, feas * sc), x=x, y=y)

        a = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.0, 5.0))
        eq(recs["g"], up(a * x, a * y), a * j, sc * (1 + a), x=x, y=y, a=a)
        eq(recs["g"], lo(a * x, a * y), a * lo(x, y), sc * (1 + a), x=x, y=y, a=a)
        a = -float(rng.uniform(0.1, 5.0))
        eq(recs["h"], up(a * x, a * y), a * lo(x, y), sc * (1 - a), x=x, y=y, a=a)
        eq(recs["h"], lo(a * x, a * y), a * j, sc * (1 - a), x=x, y=y, a=a)

        order(recs["i"], ctx.in_specific, ctx.specific_violation, up(z, ys) - up(z, x),
              x=x, y=ys, z=z, side="upper")
        order(recs["i"], ctx.in_specific, ctx.specific_violation, lo(z, ys) - lo(z, x),
              x=x, y=ys, z=z, side="lower")

        # (j): u ≼ x, y ≼ zz built from a common lower bound
        lb = mixed_vector(P, rng)
        xj = _comparable(S, lb, rng)
        yj = _comparable(S, lb, rng)
        zj = xj + yj - lb + cone_point(S, rng)
        order(recs["j"], ctx.in_specific, ctx.specific_violation, zj - up(xj, yj),
              u=lb, x=xj, y=yj, z=zj, side="upper")
        order(recs["j"], ctx.in_specific, ctx.specific_violation, lo(xj, yj) - lb,
              u=lb, x=xj, y=yj, z=zj, side="lower")
    return rep


def _close(a, b, bound):
    return float(np.linalg.norm(a - b)) <= bound


_PART_CLAUSES = {
    "a": "upper(x) = lower(-x), specific_upper(x) = specific_lower(-x)",
    "b": "x = specific_upper - lower = upper - specific_lower",
    "c": "upper(x+y) ≤ upper(x) + upper(y), specific_lower(x+y) ≤ sum",
    "d": "specific_upper(x+y) ≤ sum, lower(x+y) ≤ lower(x) + lower(y)",
    "e": "specific_upper ∧ lower = 0 = specific_lower ∧ upper",
    "f": "x ≽ 0  <=>  x = upper = specific_upper and lower = specific_lower = 0",
    "g": "x ≥ 0  <=>  x = upper and specific_lower = 0",
}


def check_part_identities(ctx, sample_count=200, seed=0, certify=True):
    """Sampled check of the identities for upper and lower parts.

    Subadditivity (c), (d) is asserted only for the orthant lattice and
    recorded elsewhere. Clause (e) checks the envelope value and, when
    ``certify`` is set, also LP-certifies that the origin is a maximal
    element of both lower sets.
    """
    from .gmls import ExtremalKind, certify_extremal

    ctx.require_realized("check_part_identities")
    rng = rng_from(seed)
    S, P = ctx.specific, ctx.initial
    rep = PropertyReport("upper and lower parts", ctx.label,
                         meta={"samples": sample_count, "seed": seed, "certify": certify})
    recs = {k: rep.add(k, d, ctx.lattice or k not in "cd") for k, d in _PART_CLAUSES.items()}
    feas = ctx.tol.feas
    gctx = GmlsContext.from_context(ctx) if certify else None
    zero = np.zeros(ctx.dim)

    def eq(rec, lhs, rhs, scale, **ex):
        rec.check(float(np.linalg.norm(lhs - rhs)), feas * scale, **ex)

    for k in range(sample_count):
        x, y = mixed_vector(P, rng), mixed_vector(P, rng)
        sc = _scale(x, y)
        px, pn, py, ps = parts(ctx, x), parts(ctx, -x), parts(ctx, y), parts(ctx, x + y)

        eq(recs["a"], px.upper, pn.lower, sc, x=x)
        eq(recs["a"], px.specific_upper, pn.specific_lower, sc, x=x)

        eq(recs["b"], px.specific_upper - px.lower, x, sc, x=x)
        eq(recs["b"], px.upper - px.specific_lower, x, sc, x=x)

        for rec, name in ((recs["c"], "upper"), (recs["c"], "specific_lower"),
                          (recs["d"], "specific_upper"), (recs["d"], "lower")):
            gap = getattr(px, name) + getattr(py, name) - getattr(ps, name)
            rec.check_bool(ctx.in_initial(gap), ctx.initial_violation(gap), x=x, y=y, part=name)

        eq(recs["e"], lower_envelope(ctx, px.specific_upper, px.lower), zero, sc, x=x)
        eq(recs["e"], lower_envelope(ctx, px.specific_lower, px.upper), zero, sc, x=x)
        if certify:
            for a, b in ((px.specific_upper, px.lower), (px.specific_lower, px.upper)):
                cert = certify_extremal(gctx, a, b, zero, ExtremalKind.MAXIMAL)
                recs["e"].check_bool(cert.certified, max(cert.worst_probe, 0.0), x=x,
                                     certificate="zero maximal")

        # (f), (g): alternate constructed members with the raw sample
        xs = _comparable(S, zero, rng) if k % 2 else x
        pf = parts(ctx, xs)
        lhs = ctx.in_specific(xs)
        ssf = _scale(xs)
        rhs = (_close(pf.upper, xs, feas * ssf) and _close(pf.specific_upper, xs, feas * ssf)
               and _close(pf.lower, zero, feas * ssf) and _close(pf.specific_lower, zero, feas * ssf))
        recs["f"].check_bool(lhs == rhs, x=xs)
        xp = _comparable(P, zero, rng) if k % 2 else x
        pg = parts(ctx, xp)
        ssg = _scale(xp)
        lhs = ctx.in_initial(xp)
        rhs = _close(pg.upper, xp, feas * ssg) and _close(pg.specific_lower, zero, feas * ssg)
        recs["g"].check_bool(lhs == rhs, x=xp)
    return rep
