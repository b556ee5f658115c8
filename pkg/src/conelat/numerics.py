"""Dense kernels: least squares, nonnegative least squares and a two-phase
simplex solver.

Everything here is sized for small problems (a few dozen variables at most)
and favours predictable, verifiable output over speed. Feasibility tests are
relative: a slack ``feas`` is always multiplied by ``1 + norm(data)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import ConvergenceError, DimensionError

__all__ = [
    "Tolerances",
    "LpStatus",
    "LpProblem",
    "LpResult",
    "as_vector",
    "as_matrix",
    "solve_least_squares",
    "nnls",
    "nnls_kkt_residual",
    "lp_solve",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical slacks shared by every check in the package.

    Parameters
    ----------
    feas : float
        Relative feasibility slack.
    opt : float
        Optimality slack for reduced costs in the simplex method.
    zero : float
        Magnitude below which a scalar counts as zero.
    """

    feas: float = 1e-9
    opt: float = 1e-9
    zero: float = 1e-8

    def __post_init__(self):
        for name in ("feas", "opt", "zero"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"tolerance {name} must be positive, got {value!r}")
        if self.feas > self.zero:
            raise ValueError("feas tolerance must not exceed zero tolerance")


DEFAULT_TOL = Tolerances()


def as_vector(x, name="x"):
    """Return ``x`` as a finite 1-d float array."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"{name} must be a nonempty 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


def as_matrix(a, name="A"):
    """Return ``a`` as a finite 2-d float array."""
    m = np.asarray(a, dtype=float)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"{name} must be a nonempty matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def solve_least_squares(A, b):
    """Minimum-norm least-squares solution of ``A x ~ b``.

    Uses a complete orthogonal factorization with column pivoting (LAPACK
    ``gelsy``), so rank-deficient systems resolve deterministically to the
    minimum-norm minimizer.
    """
    A = as_matrix(A)
    b = as_vector(b, "b")
    if A.shape[0] != b.shape[0]:
        raise DimensionError(f"A has {A.shape[0]} rows but b has {b.shape[0]} entries")
    x, _, _, _ = scipy.linalg.lstsq(A, b, lapack_driver="gelsy")
    return x


def _kkt_scale(A, b):
    return max(1.0, np.linalg.norm(A)) * (1.0 + np.linalg.norm(b))


def nnls_kkt_residual(A, b, lam, tol=DEFAULT_TOL):
    """Worst violation of the NNLS optimality conditions, relative to scale.

    With gradient ``g = A^T (A lam - b)`` the conditions are ``g_i = 0`` on
    active coordinates (``lam_i > zero``), ``g_i >= 0`` elsewhere and
    ``lam >= 0``. The return value is the largest violation divided by
    ``max(1, ||A||_F) * (1 + ||b||)``.
    """
    A = as_matrix(A)
    b = as_vector(b, "b")
    lam = np.asarray(lam, dtype=float)
    g = A.T @ (A @ lam - b)
    active = lam > tol.zero
    viol = np.zeros_like(g)
    viol[active] = np.abs(g[active])
    viol[~active] = np.maximum(-g[~active], 0.0)
    worst = max(float(viol.max(initial=0.0)), float(np.maximum(-lam, 0.0).max(initial=0.0)))
    return worst / _kkt_scale(A, b)


def nnls(A, b, tol=DEFAULT_TOL):
    """Nonnegative least squares, ``argmin ||A lam - b||`` over ``lam >= 0``.

    Lawson-Hanson active-set iteration. The outer loop (one index promoted to
    the passive set per pass) is capped at ``3 * A.shape[1]`` passes.

    Raises
    ------
    ConvergenceError
        If the cap is reached or the returned point fails the KKT check at
        ``tol.feas``.
    """
    A = as_matrix(A)
    b = as_vector(b, "b")
    m, n = A.shape
    if m != b.shape[0]:
        raise DimensionError(f"A has {m} rows but b has {b.shape[0]} entries")

    eps_w = 10 * np.finfo(float).eps * max(m, n) * max(1.0, np.abs(A).sum(axis=0).max()) * (
        1.0 + np.linalg.norm(b))
    lam = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    blocked = np.zeros(n, dtype=bool)
    max_outer = 3 * n

    converged = False
    for _ in range(max_outer + 1):
        w = A.T @ (b - A @ lam)
        cand = ~passive & ~blocked & (w > eps_w)
        if not cand.any():
            converged = True
            break
        j = int(np.argmax(np.where(cand, w, -np.inf)))
        passive[j] = True

        z = np.zeros(n)
        z[passive] = solve_least_squares(A[:, passive], b)
        if z[j] <= 0.0:
            # rounding made the promoted column useless; skip it this round
            passive[j] = False
            blocked[j] = True
            continue
        blocked[:] = False

        for _inner in range(3 * n + 1):
            bad = passive & (z <= 0.0)
            if not bad.any():
                break
            alpha = np.min(lam[bad] / (lam[bad] - z[bad]))
            lam = lam + alpha * (z - lam)
            passive &= lam > np.finfo(float).eps * max(1.0, lam.max(initial=0.0))
            lam[~passive] = 0.0
            z = np.zeros(n)
            if passive.any():
                z[passive] = solve_least_squares(A[:, passive], b)
        else:
            raise ConvergenceError("nnls inner loop did not terminate")
        lam = z
    if not converged:
        raise ConvergenceError(f"nnls did not converge within {max_outer} outer iterations")

    lam = np.maximum(lam, 0.0)
    if nnls_kkt_residual(A, b, lam, tol) > tol.feas:
        raise ConvergenceError(
            "nnls result fails KKT check (residual "
            f"{nnls_kkt_residual(A, b, lam, tol):.3e} > {tol.feas:.1e})")
    return lam


class LpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LpProblem:
    """``maximize <c, v>`` subject to ``A_eq v = b_eq`` and ``v >= 0``."""

    c: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray

    def __post_init__(self):
        c = as_vector(self.c, "c")
        A = as_matrix(self.A_eq, "A_eq")
        b = as_vector(self.b_eq, "b_eq")
        if A.shape != (b.shape[0], c.shape[0]):
            raise DimensionError(
                f"inconsistent LP shapes: c {c.shape}, A_eq {A.shape}, b_eq {b.shape}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A_eq", A)
        object.__setattr__(self, "b_eq", b)


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    x: np.ndarray | None = None
    value: float | None = None
    iterations: int = 0
    basis: tuple = field(default=(), repr=False)


REINVERT_EVERY = 25
DEGENERATE_RUN = 50


class _Tableau:
    """Dense simplex tableau over source data ``M = [A | b]``.

    The tableau ``B^{-1} M`` is rebuilt from ``M`` every
    :data:`REINVERT_EVERY` pivots and reduced costs are recomputed from the
    objective each step, so rounding does not accumulate across pivots.
    """

    def __init__(self, M, basis, piv_tol):
        self.M = M
        self.basis = list(basis)
        self.piv_tol = piv_tol
        self.iterations = 0
        self.T = M.copy()
        self.reinvert()

    def reinvert(self):
        B = self.M[:, self.basis]
        try:
            self.T = np.linalg.solve(B, self.M)
        except np.linalg.LinAlgError:
            pass  # keep the pivoted tableau; the final check still applies

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = j
        self.iterations += 1
        if self.iterations % REINVERT_EVERY == 0:
            self.reinvert()

    def reduced_costs(self, c):
        return c - c[self.basis] @ self.T[:, :-1]

    def value(self, c):
        return float(c[self.basis] @ self.T[:, -1])

    def run(self, c, allowed, opt_tol, max_iter):
        """Maximize ``<c, v>`` from the current basis. Returns ``False`` if unbounded.

        The leaving row is the largest pivot among ratio ties. After
        :data:`DEGENERATE_RUN` consecutive degenerate pivots the rule falls
        back to Bland's lowest index, which cannot cycle.
        """
        degenerate = 0
        while True:
            if self.iterations > max_iter:
                raise ConvergenceError("simplex iteration cap exceeded")
            T = self.T
            red = self.reduced_costs(c)
            entering = np.flatnonzero(allowed & (red > opt_tol))
            if entering.size == 0:
                return True
            j = int(entering[0])  # Bland: lowest index
            colj = T[:, j]
            rows = np.flatnonzero(colj > self.piv_tol)
            if rows.size == 0:
                return False
            ratios = np.maximum(T[rows, -1], 0.0) / colj[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * (1.0 + best)]
            if degenerate < DEGENERATE_RUN:
                r = int(ties[np.argmax(colj[ties])])
            else:
                piv = colj[ties]
                ties = ties[piv >= 1e-3 * piv.max()]
                r = int(ties[np.argmin(np.asarray(self.basis)[ties])])
            degenerate = degenerate + 1 if best <= 0.0 else 0
            self.pivot(r, j)


def lp_solve(problem, tol=DEFAULT_TOL, max_iter=None):
    """Two-phase tableau simplex with Bland's anti-cycling rule.

    Parameters
    ----------
    problem : LpProblem
    tol : Tolerances
    max_iter : int, optional
        Pivot cap for each phase; defaults to ``50 * (m + n) + 100``.

    Returns
    -------
    LpResult
        For an optimal result the point is recomputed from the final basis
        and checked against ``A_eq v = b_eq`` within
        ``feas * (1 + ||b_eq|| + ||A_eq|| ||v||)`` (max norms).
    """
    A0, b0, c0 = problem.A_eq, problem.b_eq, problem.c
    m, n = A0.shape
    if max_iter is None:
        max_iter = 50 * (m + n) + 100
    bnorm = np.linalg.norm(b0)
    feas_abs = tol.feas * (1.0 + bnorm)
    piv_tol = 1e-11 * max(1.0, np.abs(A0).max())
    opt_tol = tol.opt * max(1.0, np.abs(c0).max())

    A = A0.copy()
    b = b0.copy()
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # phase 1: start from positive unit columns (slacks) where a row has
    # one and from artificials elsewhere, then maximize -sum(artificials)
    start = list(range(n, n + m))
    nz = A != 0
    for j in np.flatnonzero(nz.sum(axis=0) == 1):
        r = int(np.flatnonzero(nz[:, j])[0])
        if A[r, j] > 0 and start[r] >= n:
            start[r] = int(j)
    tab = _Tableau(np.hstack([A, np.eye(m), b[:, None]]), start, piv_tol)
    c1 = np.concatenate([np.zeros(n), -np.ones(m)])
    allowed = np.ones(n + m, dtype=bool)
    allowed[n:] = False  # artificials never re-enter
    tab.run(c1, allowed, 1e-12 * max(1.0, np.abs(A).max()), max_iter)
    tab.reinvert()
    if -tab.value(c1) > feas_abs:
        return LpResult(LpStatus.INFEASIBLE, iterations=tab.iterations)

    # drive artificials out of the basis; drop redundant rows
    keep = []
    for r in range(m):
        if tab.basis[r] < n:
            keep.append(r)
            continue
        row = tab.T[r, :n]
        j = int(np.argmax(np.abs(row)))
        if abs(row[j]) > piv_tol:
            tab.pivot(r, j)
            keep.append(r)
    basis = [tab.basis[r] for r in keep]
    tab = _Tableau(np.hstack([A[keep], b[keep, None]]), basis, piv_tol)

    # phase 2
    bounded = tab.run(c0, np.ones(n, dtype=bool), opt_tol, max_iter)
    if not bounded:
        return LpResult(LpStatus.UNBOUNDED, iterations=tab.iterations)

    x = np.zeros(n)
    basis = list(tab.basis)
    if basis:
        B = A0[keep][:, basis]
        xb, _, _, _ = scipy.linalg.lstsq(B, b0[keep], lapack_driver="gelsy")
        x[basis] = xb
    # backward-error scale: large optima (box-clipped LPs) carry proportional rounding
    back_abs = tol.feas * (1.0 + bnorm + np.abs(A0).max(initial=0.0) * np.abs(x).max(initial=0.0))
    if x.min(initial=0.0) < -back_abs:
        raise ConvergenceError("simplex produced a materially negative basic variable")
    x = np.maximum(x, 0.0)
    resid = np.linalg.norm(A0 @ x - b0)
    if resid > back_abs:
        raise ConvergenceError(
            f"simplex solution violates equalities (residual {resid:.3e} > {back_abs:.3e})")
    return LpResult(LpStatus.OPTIMAL, x, float(c0 @ x), tab.iterations, tuple(basis))
