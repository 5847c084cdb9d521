"""LP container and solvers.

``solve`` dispatches to a named backend. ``"highs"`` runs the HiGHS dual
simplex through SciPy; ``"simplex"`` is the dense reference implementation in
:mod:`lpfc.lp.simplex`. Both return vertex solutions and are checked against
the same residual and bound tolerances before a result is called Optimal.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from lpfc.lp.model import (
    LinearProgram,
    LpSolution,
    LpStats,
    LpStatus,
    Row,
    Tolerances,
    dump,
    extend,
    load_dump,
)
from lpfc.lp.simplex import finish, solve_simplex

__all__ = [
    "LinearProgram",
    "LpSolution",
    "LpStats",
    "LpStatus",
    "Row",
    "Tolerances",
    "dump",
    "extend",
    "load_dump",
    "solve",
    "solve_highs",
    "solve_simplex",
    "BACKENDS",
]


def solve_highs(lp: LinearProgram, tols: Tolerances = Tolerances()) -> LpSolution:
    bounds = np.column_stack([lp.lower, lp.upper])
    kwargs = {}
    if lp.num_rows:
        kwargs = {"A_eq": lp.matrix(), "b_eq": lp.rhs()}
    res = linprog(
        lp.objective,
        bounds=bounds,
        method="highs-ds",
        options={
            "primal_feasibility_tolerance": min(tols.feasibility, 1e-9),
            "dual_feasibility_tolerance": tols.optimality,
        },
        **kwargs,
    )
    iterations = int(getattr(res, "nit", 0) or 0)
    if res.status == 2:
        return LpSolution(LpStatus.INFEASIBLE, np.zeros(lp.num_vars), np.nan, iterations, res.message)
    if res.status != 0 or res.x is None:
        x = np.zeros(lp.num_vars) if res.x is None else res.x
        return LpSolution(LpStatus.ITERATION_LIMIT, x, np.nan, iterations, res.message)
    return finish(lp, np.asarray(res.x, dtype=np.float64), tols, iterations)


BACKENDS = {"highs": solve_highs, "simplex": solve_simplex}


def solve(lp: LinearProgram, tols: Tolerances = Tolerances(), backend: str = "highs") -> LpSolution:
    try:
        fn = BACKENDS[backend]
    except KeyError:
        raise ValueError(f"unknown LP backend {backend!r}; choose from {sorted(BACKENDS)}") from None
    return fn(lp, tols)
