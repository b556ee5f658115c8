import numpy as np
import pytest
from scipy.optimize import linprog

from conelat import ConeSpec
from conelat._conic_lp import ConicSystem
from conelat.numerics import LpProblem, LpStatus, lp_solve

BOX = 1e6


def highs_max(obj, rows, rhs, n):
    """max <obj, z> s.t. rows z >= rhs, |z| <= BOX via HiGHS."""
    res = linprog(-obj, A_ub=-rows, b_ub=-rhs, bounds=[(-BOX, BOX)] * n, method="highs")
    return res


def polyhedral_rows(cone, base, sign):
    # base + sign z in K  <=>  H (base + sign z) >= 0
    H = cone.halfspaces
    return sign * H, -H @ base


def test_matches_highs_on_polyhedral_systems(rng):
    cones = [ConeSpec.orthant(3), ConeSpec.pyramid(), ConeSpec.diamond()]
    statuses = set()
    for _ in range(60):
        sys = ConicSystem(3, BOX)
        rows, rhs = [], []
        for _k in range(int(rng.integers(1, 4))):
            K = cones[int(rng.integers(3))]
            base = rng.integers(-3, 4, size=3).astype(float)
            sign = float(rng.choice([-1.0, 1.0]))
            sys.require(K, base, sign)
            R, r = polyhedral_rows(K, base, sign)
            rows.append(R)
            rhs.append(r)
        obj = rng.standard_normal(3)
        ours = sys.maximize(obj)
        ref = highs_max(obj, np.vstack(rows), np.concatenate(rhs), 3)
        statuses.add(ours.status)
        if ref.status == 2:
            assert ours.status is LpStatus.INFEASIBLE
        else:
            assert ours.status is LpStatus.OPTIMAL
            assert ours.value == pytest.approx(-ref.fun, rel=1e-9, abs=1e-6)
    assert statuses == {LpStatus.OPTIMAL, LpStatus.INFEASIBLE}


def test_lorentz_support_function(rng):
    # max <c, z> over z in L with z_n <= 1 equals ||c_u|| + c_t when c_t >= -||c_u||
    L = ConeSpec.lorentz(3)
    for _ in range(20):
        c = rng.standard_normal(3)
        c[-1] = abs(c[-1])
        sys = ConicSystem(3, BOX).require(L, np.zeros(3), 1.0)
        cap = ConeSpec.from_halfspaces([[0, 0, 1]], check_pointed=False)
        sys.require(cap, np.array([0, 0, 1.0]), -1.0)  # z_3 <= 1
        sol = sys.maximize(c)
        assert sol.status is LpStatus.OPTIMAL
        assert sol.value == pytest.approx(np.linalg.norm(c[:2]) + c[2], rel=1e-7)


def test_lorentz_feasibility_matches_membership(rng):
    # base + z in L and -z in L is feasible iff base in L
    L = ConeSpec.lorentz(3)
    for _ in range(40):
        base = rng.standard_normal(3) * 2
        sys = ConicSystem(3, BOX).require(L, base, 1.0).require(L, np.zeros(3), -1.0)
        expected = base[-1] >= np.linalg.norm(base[:2]) + 1e-7
        if abs(base[-1] - np.linalg.norm(base[:2])) > 1e-6:
            assert sys.feasible() == expected


def test_large_optimum_is_exact_for_integer_data():
    # an optimum reached through split free variables at the box scale
    sys = ConicSystem(2, BOX).require(ConeSpec.orthant(2), np.array([-1.0, -5.0]), 1.0)
    sys.require(ConeSpec.orthant(2), np.array([-3.0, -2.0]), 1.0)
    sol = sys.maximize(np.array([-1.0, -1.0]))
    assert np.max(np.abs(sol.z - [3, 5])) <= 1e-12


def test_lp_solve_slack_crash_start():
    # rows with their own slack column start feasible; phase 1 needs no pivots there
    A = np.array([[1.0, 1.0, 1.0, 0.0], [1.0, -1.0, 0.0, 1.0]])
    res = lp_solve(LpProblem(np.array([1.0, 0.0, 0.0, 0.0]), A, np.array([4.0, 2.0])))
    assert res.status is LpStatus.OPTIMAL and res.value == pytest.approx(3.0)
    assert np.allclose(res.x[:2], [3, 1])
