"""Linear programs over affine cone-membership constraints.

A :class:`ConicSystem` collects constraints ``base + sign * z in K`` on a free
vector ``z`` in R^n, with a box ``|z_i| <= box``, and maximizes linear
objectives over them. Cones with a generator list are encoded exactly with
nonnegative combination variables, halfspace cones with slack rows. The
Lorentz cone is replaced by an outer polyhedral approximation
``{t >= <e, u>}`` over a growing set of unit vectors ``e``; any optimum that
leaves the true cone gets a new cut and the LP is solved again. Upper bounds
obtained from the outer approximation are therefore valid for the true set,
and returned points are checked against the true cone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .cones import ConeSpec, membership_violation
from .exceptions import ConvergenceError
from .numerics import DEFAULT_TOL, LpProblem, LpStatus, lp_solve

MAX_CUT_ROUNDS = 200


@dataclass
class _Constraint:
    cone: ConeSpec
    base: np.ndarray
    sign: float
    cuts: list = field(default_factory=list)


@dataclass(frozen=True)
class ConicSolution:
    status: LpStatus
    z: np.ndarray | None
    value: float | None
    cut_rounds: int = 0


def _split_free_solve(problem, basis, n):
    """Recover ``z = z+ - z-`` from an optimal basis without cancellation.

    When both halves of a free variable are basic (the box row is then
    active) their values are huge and their difference loses digits. The
    basis system is re-solved in the exact coordinates ``d = z+ - z-``,
    ``s = z+ + z-``, where ``d`` is fixed by the cone rows alone.
    """
    A, b = problem.A_eq, problem.b_eq
    basis = list(basis)
    pos = {j: k for k, j in enumerate(basis)}
    cols, labels = [], []
    for j in basis:
        if n <= j < 2 * n and (j - n) in pos:
            continue  # z-_i handled together with z+_i
        if j < n and (j + n) in pos:
            d = A[:, j].copy()
            d[:n] = 0.0  # box rows carry only the sum
            s = np.zeros_like(d)
            s[:n] = A[:n, j]
            cols += [d, s]
            labels += [("d", j), ("s", j)]
        else:
            cols.append(A[:, j])
            labels.append(("v", j))
    C = np.column_stack(cols)
    # the first n rows are box rows; the cone rows alone usually fix d and
    # the cone variables, and solving them apart keeps box-sized numbers out
    cone_part = np.flatnonzero(np.any(C[n:] != 0, axis=0))
    if 0 < cone_part.size <= C.shape[0] - n:
        sol = np.zeros(C.shape[1])
        sol[cone_part], _, rank, _ = scipy.linalg.lstsq(C[n:, cone_part], b[n:],
                                                        lapack_driver="gelsy")
        if rank < cone_part.size:
            sol, _, _, _ = scipy.linalg.lstsq(C, b, lapack_driver="gelsy")
    else:
        sol, _, _, _ = scipy.linalg.lstsq(C, b, lapack_driver="gelsy")
    z = np.zeros(n)
    for (tag, j), val in zip(labels, sol):
        if tag == "d":
            z[j] = val
        elif tag == "v" and j < n:
            z[j] = val
        elif tag == "v" and j < 2 * n:
            z[j - n] = -val
    return z


def _unit(v):
    nv = np.linalg.norm(v)
    return v / nv if nv > 0 else None


class ConicSystem:
    def __init__(self, n, box, tol=DEFAULT_TOL):
        self.n = n
        self.box = float(box)
        self.tol = tol
        self.constraints = []

    def require(self, cone, base, sign=1.0):
        """Add the constraint ``base + sign * z in cone``."""
        base = np.asarray(base, dtype=float)
        con = _Constraint(cone, base, float(sign))
        if cone.kind == "lorentz":
            m = self.n - 1
            for i in range(m):
                e = np.zeros(m)
                e[i] = 1.0
                con.cuts += [e, -e]
        self.constraints.append(con)
        return self

    def _seed_lorentz_cuts(self):
        # tangent cuts at every base point make the outer model exact to
        # first order wherever a constraint is active at z = 0
        bases = [c.base[:-1] for c in self.constraints]
        for con in self.constraints:
            if con.cone.kind != "lorentz":
                continue
            for u in bases:
                e = _unit(u)
                if e is not None:
                    con.cuts += [e, -e]

    def _build(self, objective, l1=0.0):
        n = self.n
        blocks = []  # (coefficients on [z+, z-], own-variable block, rhs)
        n_extra = 0
        for con in self.constraints:
            s = con.sign
            G = con.cone.generators
            if G is not None:
                # G^T lam - s z = base
                zc = np.hstack([-s * np.eye(n), s * np.eye(n)])
                blocks.append((zc, G.T, con.base))
                n_extra += G.shape[0]
                continue
            if con.cone.kind == "lorentz":
                E = np.array(con.cuts)
                A = np.hstack([-E, np.ones((E.shape[0], 1))])
            else:
                A = con.cone.halfspaces
                A = A / np.linalg.norm(A, axis=1, keepdims=True)
            # A (base + s z) >= 0  ->  s A z - sigma = -A base
            zc = np.hstack([s * A, -s * A])
            blocks.append((zc, -np.eye(A.shape[0]), -A @ con.base))
            n_extra += A.shape[0]

        n_vars = 3 * n + n_extra
        rows, rhs = [], []
        # box rows: z+_i + z-_i + slack_i = box (unit entries keep pivots O(1))
        box_rows = np.zeros((n, n_vars))
        box_rows[:, :n] = np.eye(n)
        box_rows[:, n:2 * n] = np.eye(n)
        box_rows[:, 2 * n:3 * n] = np.eye(n)
        rows.append(box_rows)
        rhs.append(np.full(n, self.box))
        col = 3 * n
        for zc, extra, b in blocks:
            R = np.zeros((zc.shape[0], n_vars))
            R[:, :2 * n] = zc
            R[:, col:col + extra.shape[1]] = extra
            col += extra.shape[1]
            rows.append(R)
            rhs.append(b)
        c = np.zeros(n_vars)
        c[:n] = objective - l1
        c[n:2 * n] = -objective - l1
        return LpProblem(c, np.vstack(rows), np.concatenate(rhs))

    def _violations(self, z):
        out = []
        for con in self.constraints:
            if con.cone.kind != "lorentz":
                continue
            v = con.base + con.sign * z
            viol = membership_violation(con.cone, v, self.tol)
            if viol > self.tol.feas * (1.0 + np.linalg.norm(v)):
                out.append((con, v))
        return out

    def maximize(self, objective, stop_at=None, l1=0.0):
        """Maximize ``<objective, z>``.

        Parameters
        ----------
        stop_at : float, optional
            Stop refining Lorentz cuts as soon as the LP value over the outer
            model drops to ``stop_at`` or below; the value is then a valid
            upper bound and ``z`` may lie slightly outside the true cones.
        l1 : float
            Weight of a ``-l1 * ||z||_1`` term added to the objective.
        """
        objective = np.asarray(objective, dtype=float)
        if not getattr(self, "_seeded", False):
            self._seed_lorentz_cuts()
            self._seeded = True
        for rounds in range(MAX_CUT_ROUNDS):
            problem = self._build(objective, l1)
            res = lp_solve(problem, self.tol)
            if res.status is not LpStatus.OPTIMAL:
                return ConicSolution(res.status, None, None, rounds)
            z = _split_free_solve(problem, res.basis, self.n)
            if stop_at is not None and res.value <= stop_at:
                return ConicSolution(res.status, z, res.value, rounds)
            bad = self._violations(z)
            if not bad:
                return ConicSolution(res.status, z, res.value, rounds)
            for con, v in bad:
                e = _unit(v[:-1])
                if e is None:
                    e = np.eye(self.n - 1)[0]
                con.cuts.append(e)
        raise ConvergenceError("cutting-plane refinement for a Lorentz constraint did not settle")

    def feasible(self):
        # the least-norm feasible point keeps cuts near the data instead of
        # at box corners, which keeps the outer model well conditioned
        return self.maximize(np.zeros(self.n), l1=1.0).status is LpStatus.OPTIMAL
