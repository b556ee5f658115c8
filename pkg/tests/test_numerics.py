import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conelat.exceptions import DimensionError
from conelat.numerics import (DEFAULT_TOL, LpProblem, LpStatus, Tolerances, lp_solve, nnls,
                              nnls_kkt_residual, solve_least_squares)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def bfs_optimum(c, A, b):
    """Best objective over all basic feasible solutions, by enumeration.

    Returns None when no basic solution is feasible. Only valid for bounded
    problems, which is how the random generator below builds them.
    """
    m, n = A.shape
    rank = np.linalg.matrix_rank(A)
    best = None
    for cols in itertools.combinations(range(n), rank):
        B = A[:, cols]
        if np.linalg.matrix_rank(B) < rank:
            continue
        xb, *_ = np.linalg.lstsq(B, b, rcond=None)
        if np.linalg.norm(B @ xb - b) > 1e-9 * (1 + np.linalg.norm(b)) or xb.min() < -1e-10:
            continue
        val = float(c[list(cols)] @ xb)
        best = val if best is None else max(best, val)
    return best


def random_bounded_lp(rng):
    """Random equality-form LP whose feasible set lies in a simplex."""
    m = int(rng.integers(1, 6))
    n = int(rng.integers(m + 1, 7))
    A = rng.integers(-3, 4, size=(m, n)).astype(float)
    A[0] = rng.integers(1, 4, size=n)  # positive row bounds the region
    x0 = rng.exponential(size=n) * (rng.random(n) < 0.7)
    b = A @ x0
    if rng.random() < 0.2:
        b = b + rng.standard_normal(m)  # often infeasible
    b[0] = abs(b[0]) + 0.5
    c = rng.standard_normal(n)
    return c, A, b


# --- least squares --------------------------------------------------------

def test_least_squares_examples():
    assert np.allclose(solve_least_squares(np.eye(2), [3, 4]), [3, 4])
    assert np.allclose(solve_least_squares([[1], [1]], [1, 3]), [2])
    assert np.allclose(solve_least_squares([[1], [0]], [2, 5]), [2])


def test_least_squares_rank_deficient_minimum_norm():
    A = np.array([[1.0, 1.0], [1.0, 1.0]])
    assert np.allclose(solve_least_squares(A, [2, 2]), [1, 1])


def test_least_squares_dimension_mismatch():
    with pytest.raises(DimensionError):
        solve_least_squares(np.eye(2), [1, 2, 3])


@given(arrays(float, (5, 3), elements=finite), arrays(float, 5, elements=finite))
def test_least_squares_residual_orthogonal(A, b):
    x = solve_least_squares(A, b)
    r = A @ x - b
    scale = 1 + np.linalg.norm(A) * (1 + np.linalg.norm(x)) + np.linalg.norm(b)
    assert np.abs(A.T @ r).max() <= 1e-9 * scale ** 2


# --- nnls -----------------------------------------------------------------

def test_nnls_examples():
    assert np.allclose(nnls(np.eye(2), [-1, 2]), [0, 2])
    assert np.allclose(nnls([[1], [1]], [1, 0]), [0.5])
    assert np.allclose(nnls(np.eye(2), [3, 4]), [3, 4])


def test_nnls_kkt_on_random_instances():
    rng = np.random.default_rng(7)
    for _ in range(200):
        m, n = rng.integers(1, 9, size=2)
        A = rng.standard_normal((m, n))
        b = rng.standard_normal(m) * rng.exponential()
        lam = nnls(A, b)
        assert lam.min() >= 0
        scale = max(1.0, np.linalg.norm(A)) * (1 + np.linalg.norm(b))
        assert nnls_kkt_residual(A, b, lam) <= 1e-8 * scale


def test_nnls_matches_scipy():
    from scipy.optimize import nnls as scipy_nnls

    rng = np.random.default_rng(8)
    for _ in range(100):
        A = rng.standard_normal((6, 4))
        b = rng.standard_normal(6)
        ours = np.linalg.norm(A @ nnls(A, b) - b)
        ref = scipy_nnls(A, b)[1]
        assert ours == pytest.approx(ref, abs=1e-9)


@given(arrays(float, (4, 3), elements=finite), arrays(float, 4, elements=finite))
def test_nnls_residual_never_exceeds_b(A, b):
    lam = nnls(A, b)
    assert np.linalg.norm(A @ lam - b) <= np.linalg.norm(b) * (1 + 1e-12) + 1e-12


@given(arrays(float, (5, 4), elements=finite),
       arrays(float, 4, elements=st.floats(0, 5, allow_nan=False)))
def test_nnls_recovers_cone_points(A, mu):
    b = A @ mu
    lam = nnls(A, b)
    assert np.linalg.norm(A @ lam - b) <= DEFAULT_TOL.feas * (1 + np.linalg.norm(b)) * (
        1 + np.linalg.norm(A))


# --- lp -------------------------------------------------------------------

def test_lp_examples():
    r = lp_solve(LpProblem([1, 0], [[1, 1]], [1]))
    assert r.status is LpStatus.OPTIMAL
    assert r.value == pytest.approx(1)
    assert np.allclose(r.x, [1, 0])
    assert lp_solve(LpProblem([1], [[1]], [-1])).status is LpStatus.INFEASIBLE
    assert lp_solve(LpProblem([1, 0], [[1, -1]], [0])).status is LpStatus.UNBOUNDED


def test_lp_matches_basic_solution_enumeration():
    rng = np.random.default_rng(2024)
    statuses = set()
    for _ in range(200):
        c, A, b = random_bounded_lp(rng)
        res = lp_solve(LpProblem(c, A, b))
        best = bfs_optimum(c, A, b)
        statuses.add(res.status)
        if best is None:
            assert res.status is LpStatus.INFEASIBLE
            continue
        assert res.status is LpStatus.OPTIMAL
        assert res.value == pytest.approx(best, abs=1e-8)
        assert np.linalg.norm(A @ res.x - b) <= 1e-9 * (1 + np.linalg.norm(b))
        assert res.x.min() >= -1e-9
    assert statuses == {LpStatus.OPTIMAL, LpStatus.INFEASIBLE}


def test_lp_handles_redundant_rows():
    A = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
    r = lp_solve(LpProblem([1, 2, 0], A, [1, 2, 1]))
    assert r.status is LpStatus.OPTIMAL
    assert r.value == pytest.approx(2)


def test_lp_degenerate_cycling_example():
    # Beale's classic cycling instance, equality form with slacks
    A = np.array([[0.25, -8, -1, 9, 1, 0, 0],
                  [0.5, -12, -0.5, 3, 0, 1, 0],
                  [0, 0, 1, 0, 0, 0, 1]], dtype=float)
    c = np.array([0.75, -20, 0.5, -6, 0, 0, 0])
    r = lp_solve(LpProblem(c, A, [0, 0, 1]))
    assert r.status is LpStatus.OPTIMAL
    assert r.value == pytest.approx(1.25)


def test_tolerances_validation():
    with pytest.raises(ValueError):
        Tolerances(feas=0)
    with pytest.raises(ValueError):
        Tolerances(feas=1e-6, zero=1e-8)
