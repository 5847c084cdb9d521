"""Reference bounded-variable revised simplex (dense, two-phase).

Nonbasic variables sit at one of their bounds. The basis inverse is kept
explicitly with product-form updates and refactorized periodically. Pricing
is Dantzig's rule; after a run of degenerate pivots the solver falls back to
the least-index rule until progress resumes, which rules out cycling.
"""

from __future__ import annotations

import numpy as np

from lpfc.lp.model import LinearProgram, LpSolution, LpStatus, Tolerances

PIVOT_TOL = 1e-9
REFACTOR_EVERY = 64
STALL_LIMIT = 30


class _Tableau:
    def __init__(self, a, b, cost, lower, upper, basis, at_upper, tols):
        self.a = a
        self.b = b
        self.cost = cost
        self.lower = lower
        self.upper = upper
        self.basis = basis
        self.at_upper = at_upper
        self.tols = tols
        self.m, self.n = a.shape
        self.iterations = 0
        self.refactor()

    def refactor(self):
        self.binv = np.linalg.inv(self.a[:, self.basis])
        self.since_refactor = 0

    def nonbasic_values(self):
        x = np.where(self.at_upper, self.upper, self.lower)
        x[self.basis] = 0.0
        return x

    def primal(self):
        xn = self.nonbasic_values()
        xb = self.binv @ (self.b - self.a @ xn)
        x = xn
        x[self.basis] = xb
        return x

    def run(self, max_iter):
        """Iterate to optimality; returns 'optimal', 'limit' or 'unbounded'."""
        in_basis = np.zeros(self.n, dtype=bool)
        in_basis[self.basis] = True
        movable = self.upper > self.lower
        x = self.primal()
        stall = 0
        bland = False
        while True:
            if self.iterations >= max_iter:
                return "limit"
            y = self.cost[self.basis] @ self.binv
            d = self.cost - y @ self.a
            tol = self.tols.optimality
            cand = ~in_basis & movable & (
                (~self.at_upper & (d < -tol)) | (self.at_upper & (d > tol))
            )
            idx = np.flatnonzero(cand)
            if idx.size == 0:
                return "optimal"
            if bland:
                j = int(idx[0])
            else:
                j = int(idx[np.argmax(np.abs(d[idx]))])
            direction = -1.0 if self.at_upper[j] else 1.0
            alpha = self.binv @ self.a[:, j]
            delta = -direction * alpha
            xb = x[self.basis]
            lb, ub = self.lower[self.basis], self.upper[self.basis]
            ratios = np.full(self.m, np.inf)
            down = delta < -PIVOT_TOL
            up = delta > PIVOT_TOL
            ratios[down] = (xb[down] - lb[down]) / -delta[down]
            ratios[up] = (ub[up] - xb[up]) / delta[up]
            ratios = np.maximum(ratios, 0.0)
            flip = self.upper[j] - self.lower[j]
            t_min = ratios.min() if self.m else np.inf
            if flip <= t_min:
                t = flip
                leave = -1
            else:
                t = t_min
                if not np.isfinite(t):
                    return "unbounded"
                ties = np.flatnonzero(ratios <= t + self.tols.feasibility * 1e-2)
                if bland:
                    leave = int(ties[np.argmin(self.basis[ties])])
                else:
                    leave = int(ties[np.argmax(np.abs(delta[ties]))])
            if not np.isfinite(t):
                return "unbounded"

            x[j] += direction * t
            x[self.basis] = xb + t * delta
            self.iterations += 1
            if t <= 1e-12:
                stall += 1
                if stall > STALL_LIMIT:
                    bland = True
            else:
                stall = 0
                bland = False

            if leave < 0:
                self.at_upper[j] = not self.at_upper[j]
                continue

            out = int(self.basis[leave])
            hit_upper = delta[leave] > 0
            x[out] = self.upper[out] if hit_upper else self.lower[out]
            self.at_upper[out] = hit_upper
            self.at_upper[j] = False
            in_basis[out] = False
            in_basis[j] = True
            self.basis[leave] = j
            piv = alpha[leave]
            eta_row = self.binv[leave] / piv
            self.binv -= np.outer(alpha, eta_row)
            self.binv[leave] = eta_row
            self.since_refactor += 1
            if self.since_refactor >= REFACTOR_EVERY:
                self.refactor()
                x = self.primal()


def solve_simplex(
    lp: LinearProgram, tols: Tolerances = Tolerances(), max_iter: int = 50_000
) -> LpSolution:
    n = lp.num_vars
    if not (np.all(np.isfinite(lp.lower)) and np.all(np.isfinite(lp.upper))):
        raise ValueError("the reference simplex requires finite bounds")
    a0 = lp.matrix().toarray()
    b = lp.rhs()
    m = a0.shape[0]
    if m == 0:
        x = np.where(lp.objective < 0, lp.upper, lp.lower).astype(np.float64)
        return LpSolution(LpStatus.OPTIMAL, x, float(lp.objective @ x))

    x0 = lp.lower.astype(np.float64)
    r = b - a0 @ x0
    sign = np.where(r >= 0, 1.0, -1.0)
    a = np.hstack([a0, np.diag(sign)])
    lower = np.concatenate([lp.lower, np.zeros(m)]).astype(np.float64)
    upper = np.concatenate([lp.upper, np.full(m, np.inf)]).astype(np.float64)
    basis = np.arange(n, n + m)
    at_upper = np.zeros(n + m, dtype=bool)

    phase1_cost = np.concatenate([np.zeros(n), np.ones(m)])
    tab = _Tableau(a, b, phase1_cost, lower, upper, basis, at_upper, tols)
    state = tab.run(max_iter)
    if state != "optimal":
        return LpSolution(LpStatus.ITERATION_LIMIT, tab.primal()[:n], np.nan, tab.iterations,
                          f"phase 1 ended with {state}")
    tab.refactor()
    x = tab.primal()
    if x[n:].sum() > tols.feasibility:
        return LpSolution(LpStatus.INFEASIBLE, x[:n], np.nan, tab.iterations)

    tab.upper[n:] = 0.0
    tab.cost = np.concatenate([lp.objective, np.zeros(m)])
    state = tab.run(max_iter)
    if state != "optimal":
        return LpSolution(LpStatus.ITERATION_LIMIT, tab.primal()[:n], np.nan, tab.iterations,
                          f"phase 2 ended with {state}")
    tab.refactor()
    x = tab.primal()[:n]
    return finish(lp, x, tols, tab.iterations)


def finish(lp: LinearProgram, x: np.ndarray, tols: Tolerances, iterations: int) -> LpSolution:
    """Clip to the box and certify feasibility; a failed check is never reported Optimal."""
    x = np.clip(x, lp.lower, lp.upper)
    res = lp.residual(x)
    if res > tols.feasibility:
        return LpSolution(LpStatus.ITERATION_LIMIT, x, float(lp.objective @ x), iterations,
                          f"equality residual {res:.3e} exceeds tolerance")
    return LpSolution(LpStatus.OPTIMAL, x, float(lp.objective @ x), iterations)
