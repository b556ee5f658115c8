import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conelat import (ConeSpec, MixedLatticeContext, Realization, check_envelope_identities,
                     check_part_identities, contains, lattice_like_ops, lower_envelope,
                     moreau_decompose, parts, upper_envelope)
from conelat.exceptions import CertificationError, ContextError

from conftest import REALIZED

vec3 = arrays(float, 3, elements=st.floats(-10, 10, allow_nan=False))
FEAS = 1e-9


@pytest.fixture(scope="module")
def orth2():
    return MixedLatticeContext(ConeSpec.orthant(2))


@pytest.fixture(scope="module")
def dp():
    return MixedLatticeContext(ConeSpec.diamond(), ConeSpec.pyramid())


@pytest.fixture(scope="module")
def lor3():
    return MixedLatticeContext(ConeSpec.lorentz(3))


# --- contexts ---------------------------------------------------------------

def test_realization_detection():
    for make in REALIZED.values():
        assert make().realization is Realization.PROJECTION
    P = ConeSpec.pyramid()
    assert MixedLatticeContext(P, P).realization is Realization.ABSTRACT


def test_context_defaults_initial_to_dual():
    ctx = MixedLatticeContext(ConeSpec.diamond())
    assert ctx.initial.kind == "pyramid"


def test_context_rejects_bad_pairs():
    with pytest.raises(ContextError):
        MixedLatticeContext(ConeSpec.pyramid(), ConeSpec.diamond())
    with pytest.raises(ContextError):
        MixedLatticeContext(ConeSpec.orthant(2), ConeSpec.orthant(3))


def test_for_cone_orients_the_pair():
    ctx = MixedLatticeContext.for_cone(ConeSpec.pyramid())
    assert ctx.specific.kind == "diamond" and ctx.initial.kind == "pyramid"


def test_abstract_context_refuses_closed_forms():
    P = ConeSpec.pyramid()
    ctx = MixedLatticeContext(P, P)
    with pytest.raises(ContextError):
        upper_envelope(ctx, [1, 0, 0], [0, 0, 0])


# --- envelopes --------------------------------------------------------------

def test_envelope_examples(orth2, dp):
    assert np.allclose(upper_envelope(orth2, [1, 5], [3, 2]), [3, 5])
    assert np.allclose(lower_envelope(orth2, [1, 5], [3, 2]), [1, 2])
    x = np.array([0.3, -2.0])
    assert np.allclose(upper_envelope(orth2, x, x), x)
    assert np.allclose(lower_envelope(orth2, x, x), x)
    assert np.allclose(upper_envelope(dp, [2, 2, 0], [-2, 2, 0]), [0, 2, 2])
    # y∧x for x=(2,2,0), y=(-2,2,0)
    assert np.allclose(lower_envelope(dp, [-2, 2, 0], [2, 2, 0]), [0, 2, -2])


def test_orthant_envelopes_are_componentwise(rng):
    for n in (1, 2, 5):
        ctx = MixedLatticeContext(ConeSpec.orthant(n))
        for _ in range(100):
            x, y = rng.integers(-9, 10, size=(2, n)).astype(float)
            assert np.array_equal(upper_envelope(ctx, x, y), np.maximum(x, y))
            assert np.array_equal(lower_envelope(ctx, x, y), np.minimum(x, y))


def test_envelope_bounds(realized_ctx, rng):
    for _ in range(50):
        x, y = rng.standard_normal((2, realized_ctx.dim))
        j = upper_envelope(realized_ctx, x, y)
        m = lower_envelope(realized_ctx, x, y)
        assert realized_ctx.in_specific(j - x) and realized_ctx.in_initial(j - y)
        assert realized_ctx.in_specific(x - m) and realized_ctx.in_initial(y - m)


@given(vec3, vec3)
def test_identity_a_property(x, y):
    ctx = REALIZED["diamond_pyramid"]()
    lhs = upper_envelope(ctx, x, y) + lower_envelope(ctx, y, x)
    assert np.linalg.norm(lhs - (x + y)) <= FEAS * (1 + np.linalg.norm(x) + np.linalg.norm(y))


@given(vec3, vec3)
def test_upper_envelope_is_least_among_candidates(x, y):
    # any w with w ≽ x and w ≥ y satisfies w ≥ x∨y (lattice-like minimality)
    ctx = REALIZED["lorentz3"]()
    j = upper_envelope(ctx, x, y)
    rng = np.random.default_rng(0)
    for _ in range(5):
        w = j + np.append(rng.standard_normal(2), 3.0) * rng.exponential()
        if ctx.in_specific(w - x) and ctx.in_initial(w - y):
            assert ctx.in_initial(w - j)


# --- parts and Moreau -------------------------------------------------------

def test_parts_examples(orth2, lor3):
    p = parts(orth2, [2, -3])
    assert np.allclose(p.upper, [2, 0]) and np.allclose(p.specific_upper, [2, 0])
    assert np.allclose(p.lower, [0, 3]) and np.allclose(p.specific_lower, [0, 3])
    q = parts(lor3, [3, 0, 1])
    assert np.allclose(q.specific_upper, [2, 0, 2]) and np.allclose(q.lower, [-1, 0, 1])


def test_parts_of_specific_members(realized_ctx, rng):
    from conelat.sampling import cone_point

    for _ in range(20):
        x = cone_point(realized_ctx.specific, rng)
        p = parts(realized_ctx, x)
        assert np.allclose(p.specific_upper, x) and np.allclose(p.lower, 0, atol=1e-9)


def test_parts_reconstruction_is_exact(realized_ctx, rng):
    for _ in range(50):
        x = rng.standard_normal(realized_ctx.dim)
        p = parts(realized_ctx, x)
        eps = np.finfo(float).eps * (1 + np.linalg.norm(x)) * 4
        assert np.linalg.norm(p.specific_upper - p.lower - x) <= eps
        assert np.linalg.norm(p.upper - p.specific_lower - x) <= eps


def test_moreau_examples(orth2, lor3):
    d = moreau_decompose(orth2, [2, -3])
    assert np.allclose(d.specific_upper, [2, 0]) and np.allclose(d.lower, [0, 3])
    d = moreau_decompose(lor3, [3, 0, 1])
    assert np.allclose(d.specific_upper, [2, 0, 2]) and np.allclose(d.lower, [-1, 0, 1])
    assert d.specific_upper @ d.lower == pytest.approx(0)


def test_moreau_of_negated_generators():
    for ctx in (REALIZED["orthant3"](), REALIZED["diamond_pyramid"]()):
        for g in ctx.initial.generators:
            d = moreau_decompose(ctx, -g)
            assert np.allclose(d.specific_upper, 0) and np.allclose(d.lower, g)


def test_moreau_invariants(realized_ctx, rng):
    for _ in range(100):
        x = rng.standard_normal(realized_ctx.dim) * 2
        d = moreau_decompose(realized_ctx, x)
        sc = 1 + np.linalg.norm(x)
        assert d.reconstruction_residual <= FEAS * sc
        assert d.orthogonality_residual <= FEAS * sc ** 2
        assert (np.linalg.norm(d.specific_upper) <= FEAS * sc) == contains(realized_ctx.initial, -x)


def test_moreau_detects_broken_projection(monkeypatch, lor3):
    import conelat.envelopes as env

    real = env.project

    def skewed(K, x, tol):
        r = real(K, x, tol)
        return type(r)(r.point * 1.01, r.distance, r.characterization_residual)

    monkeypatch.setattr(env, "project", skewed)
    with pytest.raises(CertificationError) as info:
        env.moreau_decompose(lor3, [3, 0, 1])
    assert info.value.residuals


# --- lattice-like operations ------------------------------------------------

def test_lattice_like_ops_examples(orth2, dp):
    ops = lattice_like_ops(orth2, [1, 5], [3, 2])
    assert np.allclose(ops.join, [3, 5]) and np.allclose(ops.meet, [1, 2])
    ops = lattice_like_ops(dp, [2, 2, 0], [-2, 2, 0])
    assert np.allclose(ops.join, [0, 2, 2]) and np.allclose(ops.dual_meet, [0, 2, -2])


def test_lattice_like_ops_alias_envelopes(realized_ctx, rng):
    for _ in range(30):
        x, y = rng.standard_normal((2, realized_ctx.dim))
        ops = lattice_like_ops(realized_ctx, x, y)
        bound = FEAS * (1 + np.linalg.norm(x) + np.linalg.norm(y))
        assert np.linalg.norm(ops.join - upper_envelope(realized_ctx, x, y)) <= bound
        assert np.linalg.norm(ops.dual_join - upper_envelope(realized_ctx, y, x)) <= bound
        assert np.linalg.norm(ops.meet - lower_envelope(realized_ctx, x, y)) <= bound
        assert np.linalg.norm(ops.dual_meet - lower_envelope(realized_ctx, y, x)) <= bound


# --- checkers ---------------------------------------------------------------

def test_envelope_checker_orthant_all_pass():
    rep = check_envelope_identities(REALIZED["orthant3"](), 60, seed=1)
    assert rep.passed and rep.total_failures == 0
    assert all(r.asserted for r in rep)


def test_envelope_checker_diamond_pyramid():
    rep = check_envelope_identities(REALIZED["diamond_pyramid"](), 60, seed=1)
    assert rep.passed
    assert {r.clause for r in rep if r.asserted} == set("abcefgh")
    assert "z∧x ≼ z∧y" in rep["i"].note
    for r in rep:
        # failures = 0 implies no counterexample stored
        assert (r.failures == 0) == (r.counterexample is None)


def test_recorded_counterexamples_replay():
    ctx = REALIZED["lorentz3"]()
    rep = check_envelope_identities(ctx, 60, seed=2)
    d = rep["d"]
    assert d.failures > 0  # Lorentz is not a mixed lattice
    for ex in d.counterexamples:
        j = upper_envelope(ctx, ex["x"], ex["y"])
        m = lower_envelope(ctx, ex["x"], ex["y"])
        upper = upper_envelope(ctx, ex["u"], ex["v"]) - j
        lower = lower_envelope(ctx, ex["u"], ex["v"]) - m
        assert not (ctx.in_initial(upper) and ctx.in_initial(lower))


def test_envelope_checker_is_deterministic():
    ctx = REALIZED["diamond_pyramid"]()
    a = check_envelope_identities(ctx, 20, seed=5).to_dict()
    b = check_envelope_identities(ctx, 20, seed=5).to_dict()
    assert a == b


def test_report_merge_is_associative():
    ctx = REALIZED["lorentz3"]()
    r1, r2, r3 = (check_envelope_identities(ctx, 10, seed=s) for s in (1, 2, 3))
    left = r1.merge(r2).merge(r3)
    right = r1.merge(r2.merge(r3))
    for k in left.clauses:
        assert left[k].samples == right[k].samples == r1[k].samples + r2[k].samples + r3[k].samples
        assert left[k].failures == right[k].failures


def test_part_checker_orthant_all_pass():
    rep = check_part_identities(REALIZED["orthant3"](), 40, seed=1)
    assert rep.passed and rep.total_failures == 0


def test_part_checker_lorentz_records_subadditivity():
    rep = check_part_identities(REALIZED["lorentz3"](), 40, seed=1)
    assert rep.passed
    assert not rep["c"].asserted and not rep["d"].asserted
    for k in "abefg":
        assert rep[k].failures == 0
