import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conelat import (ConeSpec, contains, dual_cone, moreau_split, project, project_dual,
                     project_translated, verify_nearest)
from conelat.cones import PYRAMID_GENERATORS
from conelat.exceptions import ProjectionError
from conelat.numerics import nnls

from conftest import BUILTIN_CONES

vec3 = arrays(float, 3, elements=st.floats(-10, 10, allow_nan=False))
FEAS = 1e-9


def lorentz_oracle(x):
    """Closed form derived independently via the spectral decomposition."""
    u, t = x[:-1], x[-1]
    nu = np.linalg.norm(u)
    if nu == 0:
        return np.append(u * 0, max(t, 0.0))
    e1 = np.append(u / nu, 1) / 2
    e2 = np.append(-u / nu, 1) / 2
    return max(t + nu, 0.0) * e1 + max(t - nu, 0.0) * e2


def test_projection_examples():
    r = project(ConeSpec.orthant(2), [-1, 2])
    assert np.allclose(r.point, [0, 2]) and r.distance == pytest.approx(1)
    assert np.allclose(project(ConeSpec.lorentz(3), [3, 0, 1]).point, [2, 0, 2])
    assert np.allclose(project(ConeSpec.lorentz(3), [1, 0, -2]).point, [0, 0, 0])


def test_lorentz_edge_cases():
    L = ConeSpec.lorentz(3)
    assert np.allclose(project(L, [0, 0, -1]).point, 0)
    assert np.allclose(project(L, [0, 0, 2]).point, [0, 0, 2])
    # boundary |u| = |t| is handled by the generic formula
    assert np.allclose(project(L, [1, 0, 1]).point, [1, 0, 1])
    assert np.allclose(project(L, [1, 0, -1]).point, 0)


def test_lorentz_matches_spectral_oracle(rng):
    for n in (2, 3, 4, 6):
        L = ConeSpec.lorentz(n)
        for _ in range(100):
            x = rng.standard_normal(n) * 3
            assert np.allclose(project(L, x).point, lorentz_oracle(x), atol=1e-12)


def test_generator_projection_matches_nnls_oracle(rng):
    P = ConeSpec.pyramid()
    for _ in range(100):
        x = rng.standard_normal(3)
        lam = nnls(PYRAMID_GENERATORS.T, x)
        assert np.allclose(project(P, x).point, PYRAMID_GENERATORS.T @ lam, atol=1e-10)


def test_translated_examples(cone, rng):
    y = rng.standard_normal(cone.dim)
    assert np.allclose(project_translated(cone, np.zeros(cone.dim), y), project(cone, y).point)
    assert np.allclose(project_translated(ConeSpec.orthant(2), [1, 1], [0, 3]), [1, 3])
    for _ in range(20):
        base, y = rng.standard_normal((2, cone.dim))
        assert np.allclose(project_translated(cone, base, y) - base,
                           project(cone, y - base).point, atol=1e-12)


def test_project_dual_examples(rng):
    assert np.allclose(project_dual(ConeSpec.orthant(2), [-1, 2]), [0, 2])
    L = ConeSpec.lorentz(3)
    D, P = ConeSpec.diamond(), ConeSpec.pyramid()
    for _ in range(50):
        x = rng.standard_normal(3)
        assert np.allclose(project_dual(L, x), project(L, x).point, atol=1e-9)
        lam = nnls(PYRAMID_GENERATORS.T, x)
        assert np.allclose(project_dual(D, x), PYRAMID_GENERATORS.T @ lam, atol=1e-9)
        assert np.allclose(project_dual(D, x), project(P, x).point, atol=1e-9)


def test_verify_nearest_examples():
    O = ConeSpec.orthant(2)
    assert verify_nearest(O, [-1, 2], [0, 2]).ok
    bad = verify_nearest(O, [-1, 2], [1, 2])
    assert not bad.ok and bad.residual == pytest.approx(2)
    assert verify_nearest(ConeSpec.lorentz(3), [3, 0, 1], [2, 0, 2]).ok


def test_verify_nearest_rejects_non_members():
    assert not verify_nearest(ConeSpec.pyramid(), [2, 2, 0], [2, 2, 0]).ok


def test_every_projection_passes_verify_nearest(cone, rng):
    for _ in range(200):
        x = rng.standard_normal(cone.dim) * rng.exponential(3)
        r = project(cone, x)
        assert verify_nearest(cone, x, r.point).ok
        assert r.characterization_residual <= FEAS * (1 + np.linalg.norm(x) + np.linalg.norm(r.point))
        assert r.distance == pytest.approx(np.linalg.norm(x - r.point))


def test_projection_error_carries_residuals(monkeypatch):
    import conelat.projection as proj

    monkeypatch.setattr(proj, "_raw_projection", lambda K, x, tol: x + 1.0)
    with pytest.raises(ProjectionError) as info:
        proj.project(ConeSpec.orthant(2), [-1, 2])
    assert info.value.residuals


@pytest.mark.parametrize("name", list(BUILTIN_CONES))
@given(x=vec3, t=st.floats(0.01, 50))
def test_projection_properties(name, x, t):
    K = BUILTIN_CONES[name]
    x = np.resize(x, K.dim)
    p = project(K, x).point
    scale = 1 + np.linalg.norm(x) + np.linalg.norm(p)
    # idempotence and positive homogeneity
    assert np.linalg.norm(project(K, p).point - p) <= FEAS * scale
    assert np.linalg.norm(project(K, t * x).point - t * p) <= FEAS * scale * (1 + t)
    # Moreau split through the dual cone
    plus, minus = moreau_split(K, x)
    assert np.linalg.norm(x - plus + minus) <= FEAS * scale
    assert abs(plus @ minus) <= FEAS * scale ** 2
    # members sit at distance ~0, non-members strictly away
    d = project(K, x).distance
    if contains(K, x):
        assert d <= 100 * FEAS * scale
    else:
        assert d > 0


def test_moreau_split_parts_in_cones(cone, rng):
    D = dual_cone(cone)
    for _ in range(50):
        x = rng.standard_normal(cone.dim)
        plus, minus = moreau_split(cone, x)
        assert contains(cone, plus) and contains(D, minus)
