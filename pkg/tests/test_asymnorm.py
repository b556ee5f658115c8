import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conelat import ConeSpec, MixedLatticeContext
from conelat.asymnorm import (NormKind, check_axioms, check_isotone, eval_norm, reverify)
from conelat.exceptions import ContextError

from conftest import REALIZED

FEAS = 1e-9


def test_eval_norm_examples():
    orth = MixedLatticeContext(ConeSpec.orthant(2))
    assert eval_norm(orth, "SpecificUpper", [2, -3]).tolist() == [2.0, 0.0]
    lor = MixedLatticeContext(ConeSpec.lorentz(3))
    assert np.allclose(eval_norm(lor, "SpecificUpper", [3, 0, 1]), [2, 0, 2])
    dp = REALIZED["diamond_pyramid"]()
    inside = np.array([1.0, 0.0, 2.0])
    assert np.allclose(eval_norm(dp, "SpecificUpper", inside), inside)
    assert np.allclose(eval_norm(dp, NormKind.UPPER, [3, 0, 1]), [2, 0, 2])


def test_eval_norm_requires_realized_context():
    P = ConeSpec.pyramid()
    with pytest.raises(ContextError):
        eval_norm(MixedLatticeContext(P, P), "Upper", [1, 0, 0])


@given(arrays(float, 4, elements=st.floats(-1e3, 1e3, allow_nan=False)))
def test_orthant_norm_is_positive_part_exactly(x):
    ctx = MixedLatticeContext(ConeSpec.orthant(4))
    for which in ("SpecificUpper", "Upper"):
        assert np.array_equal(eval_norm(ctx, which, x), np.maximum(x, 0.0))


def test_orthant_axioms_all_pass():
    rep = check_axioms(REALIZED["orthant3"](), "SpecificUpper", 150, seed=3)
    assert rep.passed
    for clause in ("retraction", "homogeneity", "subadditivity", "separation", "properness"):
        assert rep[clause].failures == 0 and rep[clause].asserted
    assert rep.properness_residual <= FEAS and rep.counterexamples == []


@pytest.mark.parametrize("which", ["SpecificUpper", "Upper"])
@pytest.mark.parametrize("order", ["InitialP", "SpecificS"])
def test_non_lattice_axioms(realized_ctx, which, order):
    rep = check_axioms(realized_ctx, which, 40, seed=1, subadditivity_order=order)
    assert rep.passed
    for clause in ("retraction", "homogeneity", "separation", "properness"):
        assert rep[clause].failures == 0
    assert rep["subadditivity"].asserted == realized_ctx.lattice
    for ex in rep.counterexamples:
        assert reverify(realized_ctx, which, ex)


def test_lorentz_subadditivity_is_recorded_with_counterexamples():
    ctx = REALIZED["lorentz3"]()
    rep = check_axioms(ctx, "SpecificUpper", 200, seed=0)
    assert rep["subadditivity"].failures > 0 and not rep["subadditivity"].asserted
    assert rep.counterexamples
    assert all(reverify(ctx, "SpecificUpper", ex) for ex in rep.counterexamples)


def test_axiom_report_serializes():
    rep = check_axioms(REALIZED["lorentz3"](), "Upper", 20, seed=0)
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["which"] == "Upper" and d["subadditivity_order"] == "InitialP"
    assert "properness" in {c["clause"] for c in d["clauses"]}


def test_homogeneity_at_zero():
    for make in REALIZED.values():
        ctx = make()
        assert np.array_equal(eval_norm(ctx, "SpecificUpper", np.zeros(ctx.dim)), np.zeros(ctx.dim))


def test_properness_and_retraction_identities(realized_ctx, rng):
    for which in ("SpecificUpper", "Upper"):
        for _ in range(50):
            x = rng.standard_normal(realized_ctx.dim) * 3
            q = eval_norm(realized_ctx, which, x)
            sc = 1 + np.linalg.norm(x)
            assert np.linalg.norm(eval_norm(realized_ctx, which, x - q)) <= FEAS * sc
            assert np.linalg.norm(eval_norm(realized_ctx, which, q) - q) <= FEAS * sc


def test_isotone_orthant_has_no_violations():
    rep = check_isotone(REALIZED["orthant3"](), "SpecificUpper", 200, seed=0)
    assert rep.passed and rep.total_failures == 0
    assert set(rep.clauses) == {"S->S", "S->P", "P->S", "P->P"}


def test_isotone_constructed_pair():
    ctx = REALIZED["lorentz3"]()
    x = np.array([3.0, 0.0, 1.0])
    y = x + np.array([0.0, 1.0, 1.0])  # y - x on the boundary of S
    diff = eval_norm(ctx, "SpecificUpper", y) - eval_norm(ctx, "SpecificUpper", x)
    ex = {"check": "isotone", "x": x, "y": y, "cone": "S"}
    assert reverify(ctx, "SpecificUpper", ex) == (not ctx.in_specific(diff))


@pytest.mark.parametrize("name", ["lorentz3", "diamond_pyramid"])
def test_isotone_reports_reverify(name):
    ctx = REALIZED[name]()
    rep = check_isotone(ctx, "SpecificUpper", 150, seed=4)
    assert rep.passed  # nothing asserted outside the lattice case
    for rec in rep:
        assert not rec.asserted
        for ex in rec.counterexamples:
            assert reverify(ctx, "SpecificUpper", ex)


def test_reverify_rejects_unknown_kind():
    ctx = REALIZED["orthant3"]()
    with pytest.raises(ValueError):
        reverify(ctx, "Upper", {"check": "other", "x": [0, 0, 0], "y": [0, 0, 0]})
