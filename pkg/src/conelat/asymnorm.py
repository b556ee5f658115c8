"""Asymmetric cone norms given by upper-part maps.

``Q`` is either ``x ↦ 0∨x = P_S x`` (retraction onto ``S``) or
``x ↦ x∨0 = P_P x`` (retraction onto ``P``). The checkers test the axioms of
an asymmetric cone norm on samples and keep every counterexample in a form
that :func:`reverify` can replay.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .cones import _check_dim, contains, membership_violation
from .projection import project
from .report import PropertyReport, jsonable
from .sampling import cone_boundary_point, cone_point, mixed_vector, rng_from

__all__ = [
    "NormKind",
    "OrderChoice",
    "ConeNormReport",
    "eval_norm",
    "check_axioms",
    "check_isotone",
    "reverify",
]


class NormKind(str, enum.Enum):
    SPECIFIC_UPPER = "SpecificUpper"
    UPPER = "Upper"


class OrderChoice(str, enum.Enum):
    INITIAL = "InitialP"
    SPECIFIC = "SpecificS"


def _target(ctx, which):
    return ctx.specific if NormKind(which) is NormKind.SPECIFIC_UPPER else ctx.initial


def _cofactor(ctx, which):
    """Dual of the target cone inside a projection-realized context."""
    return ctx.initial if NormKind(which) is NormKind.SPECIFIC_UPPER else ctx.specific


def _order_cone(ctx, order):
    return ctx.initial if OrderChoice(order) is OrderChoice.INITIAL else ctx.specific


def eval_norm(ctx, which, x):
    """Apply ``Q`` to ``x``.

    Examples
    --------
    >>> from conelat import ConeSpec, MixedLatticeContext
    >>> ctx = MixedLatticeContext(ConeSpec.orthant(2))
    >>> eval_norm(ctx, "SpecificUpper", [2, -3]).tolist()
    [2.0, 0.0]
    """
    ctx.require_realized("eval_norm")
    K = _target(ctx, which)
    x = _check_dim(K, x)
    return project(K, x, ctx.tol).point


@dataclass
class ConeNormReport:
    """Axiom records for one map ``Q``.

    ``report`` holds clauses ``retraction``, ``homogeneity``,
    ``subadditivity``, ``separation`` and ``properness``.
    """

    which: NormKind
    subadditivity_order: OrderChoice
    report: PropertyReport
    properness_residual: float = 0.0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self):
        return self.report.passed

    def __getitem__(self, clause):
        return self.report[clause]

    def to_dict(self):
        return {
            "which": self.which.value,
            "subadditivity_order": self.subadditivity_order.value,
            "properness_residual": self.properness_residual,
            "counterexamples": jsonable(self.counterexamples),
            **self.report.to_dict(),
        }


def _scale(*vs):
    return 1.0 + sum(float(np.linalg.norm(v)) for v in vs)


def check_axioms(ctx, which="SpecificUpper", sample_count=500, seed=0,
                 subadditivity_order="InitialP"):
    """Sampled check of the asymmetric cone norm axioms and properness.

    Retraction, positive homogeneity, separation and properness are asserted.
    Subadditivity in the chosen order is asserted only in the orthant
    lattice and recorded elsewhere, with replayable counterexamples.
    """
    ctx.require_realized("check_axioms")
    which, order = NormKind(which), OrderChoice(subadditivity_order)
    rng = rng_from(seed)
    T, Tc, O = _target(ctx, which), _cofactor(ctx, which), _order_cone(ctx, order)
    Q = lambda v: eval_norm(ctx, which, v)  # noqa: E731
    feas = ctx.tol.feas
    rep = PropertyReport(f"asymmetric cone norm {which.value}", ctx.label,
                         meta={"samples": sample_count, "seed": seed,
                               "subadditivity_order": order.value})
    r1 = rep.add("retraction", "Qx = x on the target cone, Q maps into it, QQ = Q")
    r2 = rep.add("homogeneity", "Q(tx) = t Qx for t >= 0")
    r3 = rep.add("subadditivity", f"Qx + Qy - Q(x+y) in {O.label}", asserted=ctx.lattice)
    r4 = rep.add("separation", "Qx = 0 and Q(-x) = 0 force x = 0")
    rp = rep.add("properness", "Q(x - Qx) = 0")
    out = ConeNormReport(which, order, rep)
    P, zero = ctx.initial, np.zeros(ctx.dim)

    for k in range(sample_count):
        x, y = mixed_vector(P, rng), mixed_vector(P, rng)
        qx = Q(x)
        sc = _scale(x)

        t = (cone_boundary_point if k % 2 else cone_point)(T, rng)
        r1.check(float(np.linalg.norm(Q(t) - t)), feas * _scale(t), x=t)
        r1.check_bool(contains(T, qx, ctx.tol), membership_violation(T, qx, ctx.tol), x=x)
        r1.check(float(np.linalg.norm(Q(qx) - qx)), feas * sc, x=x)

        s = 0.0 if k % 10 == 0 else float(rng.exponential(2.0))
        r2.check(float(np.linalg.norm(Q(s * x) - s * qx)), feas * sc * (1 + s), x=x, t=s)

        gap = qx + Q(y) - Q(x + y)
        ok = contains(O, gap, ctx.tol)
        r3.check_bool(ok, membership_violation(O, gap, ctx.tol), check="subadditivity",
                      x=x, y=y, order=order.value)
        if not ok and len(out.counterexamples) < 10:
            out.counterexamples.append({"check": "subadditivity", "x": x, "y": y,
                                        "order": order.value})

        # separation through Moreau: x = Qx - P_{T*}(-x), so Qx = Q(-x) = 0
        # puts x in T* and in -T*, which meet only at the origin
        for v in [x] + ([zero] if k % 25 == 0 else []):
            qv, qn = Q(v), Q(-v)
            moreau = float(np.linalg.norm(v - (qv - project(Tc, -v, ctx.tol).point)))
            r4.check(moreau, feas * _scale(v), x=v, part="reconstruction")
            both_zero = max(np.linalg.norm(qv), np.linalg.norm(qn)) <= feas * _scale(v)
            r4.check_bool(not both_zero or np.linalg.norm(v) <= feas * _scale(v),
                          float(np.linalg.norm(v)) if both_zero else 0.0, x=v, part="implication")

        prop = float(np.linalg.norm(Q(x - qx)))
        rp.check(prop, feas * sc, x=x)
        out.properness_residual = max(out.properness_residual, prop)
    return out


def check_isotone(ctx, which="SpecificUpper", sample_count=500, seed=0):
    """Look for pairs where ``Q`` fails to preserve an order.

    Pairs ``x ≼ y`` and ``x ≤ y`` are built by adding random cone elements;
    ``Qy - Qx`` is tested against both ``S`` and ``P``. Violations are
    asserted absent only in the orthant lattice.
    """
    ctx.require_realized("check_isotone")
    which = NormKind(which)
    rng = rng_from(seed)
    S, P = ctx.specific, ctx.initial
    rep = PropertyReport(f"isotonicity of {which.value}", ctx.label,
                         meta={"samples": sample_count, "seed": seed})
    cones = {"S": S, "P": P}
    recs = {(a, b): rep.add(f"{a}->{b}", f"x {'≼' if a == 'S' else '≤'} y  =>  "
                            f"Qy - Qx in {cones[b].label}", asserted=ctx.lattice)
            for a in "SP" for b in "SP"}
    for _ in range(sample_count):
        x = mixed_vector(P, rng)
        for a in "SP":
            step = (cone_boundary_point if rng.random() < 0.5 else cone_point)(cones[a], rng)
            y = x + step
            diff = eval_norm(ctx, which, y) - eval_norm(ctx, which, x)
            for b in "SP":
                K = cones[b]
                recs[(a, b)].check_bool(contains(K, diff, ctx.tol),
                                        membership_violation(K, diff, ctx.tol),
                                        check="isotone", x=x, y=y, cone=b)
    return rep


def reverify(ctx, which, example):
    """Replay a stored counterexample; True when the violation reproduces."""
    Q = lambda v: eval_norm(ctx, which, v)  # noqa: E731
    x, y = np.asarray(example["x"], dtype=float), np.asarray(example["y"], dtype=float)
    if example["check"] == "subadditivity":
        K = _order_cone(ctx, example["order"])
        return not contains(K, Q(x) + Q(y) - Q(x + y), ctx.tol)
    if example["check"] == "isotone":
        K = ctx.specific if example["cone"] == "S" else ctx.initial
        return not contains(K, Q(y) - Q(x), ctx.tol)
    raise ValueError(f"unknown counterexample kind {example['check']!r}")
