"""The adaptive LP-FC loop: solve, find a frustrated cycle, add its triangles, re-solve."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from lpfc.codes import TannerGraph
from lpfc.constraints import NoProgress, augment, min_violation
from lpfc.decoder import (
    INT_TOL,
    Assignment,
    BeliefSolution,
    build_basic_lp,
    classify,
)
from lpfc.frustration import (
    EPS,
    DegenerateProjection,
    FrustratedCycle,
    build_implication_graph,
    find_frustrated_cycle,
    project_to_variables,
)
from lpfc.lp import LpStats, Tolerances, solve

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LpfcConfig:
    max_iterations: int = 50
    eps: float = EPS
    int_tol: float = INT_TOL
    feas_tol: float = 1e-7
    opt_tol: float = 1e-9
    backend: str = "highs"
    check_cuts: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if min(self.eps, self.int_tol, self.feas_tol, self.opt_tol) <= 0:
            raise ValueError("tolerances must be positive")

    @property
    def tols(self) -> Tolerances:
        return Tolerances(self.feas_tol, self.opt_tol)


class Verdict(enum.Enum):
    SUCCESS = "Success"
    FRACTIONAL_STALL = "FractionalStall"
    NO_CYCLE_FOUND = "NoCycleFound"
    ITERATION_CAP = "IterationCap"
    SOLVER_FAILURE = "SolverFailure"


@dataclass(frozen=True)
class IterationRecord:
    """One LP solve; ``cycle`` is the witness added after it, if any."""

    stats: LpStats
    status: str
    objective: float
    cycle: FrustratedCycle | None = None
    cut_violation: float | None = None

    @property
    def cycle_length(self) -> int | None:
        return None if self.cycle is None else len(self.cycle.variable_cycle)

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "objective": self.objective,
            "rows": self.stats.rows,
            "cols": self.stats.cols,
            "nonzeros": self.stats.nonzeros,
            "cycle_length": self.cycle_length,
            "pivot": None if self.cycle is None else self.cycle.pivot,
            "kind": None if self.cycle is None else self.cycle.kind.value,
        }


@dataclass(frozen=True)
class DecodeOutcome:
    verdict: Verdict
    bits: np.ndarray | None
    per_iteration: tuple[IterationRecord, ...]
    message: str = ""
    beliefs: BeliefSolution | None = field(default=None, repr=False, compare=False)
    basic: Assignment | None = None

    @property
    def iterations(self) -> int:
        return len(self.per_iteration)

    @property
    def success(self) -> bool:
        return self.verdict is Verdict.SUCCESS

    def is_all_zero(self) -> bool:
        return self.success and not np.any(self.bits)

    def trace(self) -> list[dict]:
        return [r.as_dict() for r in self.per_iteration]


def decode_lpfc(graph: TannerGraph, llr, cfg: LpfcConfig = LpfcConfig(), keep_lps: list | None = None) -> DecodeOutcome:
    """Run LP-FC on one LLR vector.

    If ``keep_lps`` is a list, every LP solved is appended to it together
    with its belief index (for offline inspection).
    """
    lp, index = build_basic_lp(graph, llr)
    records: list[IterationRecord] = []
    first: Assignment | None = None
    while True:
        sol = solve(lp, cfg.tols, cfg.backend)
        stats = lp.stats(sol.iterations)
        if keep_lps is not None:
            keep_lps.append((lp, index, sol))
        if not sol.optimal:
            records.append(IterationRecord(stats, sol.status.value, float("nan")))
            return DecodeOutcome(
                Verdict.SOLVER_FAILURE, None, tuple(records),
                f"iteration {len(records)}: {sol.status.value} {sol.message}",
            )
        beliefs = BeliefSolution.from_values(index, sol.values, sol.objective_value)
        assignment = classify(graph, beliefs, cfg.int_tol)
        if first is None:
            first = assignment
        if assignment.is_integral:
            records.append(IterationRecord(stats, sol.status.value, sol.objective_value))
            return DecodeOutcome(Verdict.SUCCESS, assignment.bits, tuple(records), beliefs=beliefs, basic=first)

        if len(records) + 1 >= cfg.max_iterations:
            records.append(IterationRecord(stats, sol.status.value, sol.objective_value))
            return DecodeOutcome(Verdict.ITERATION_CAP, None, tuple(records), beliefs=beliefs, basic=first)

        fc = find_frustrated_cycle(build_implication_graph(beliefs, cfg.eps, cfg.int_tol))
        if fc is None:
            records.append(IterationRecord(stats, sol.status.value, sol.objective_value))
            return DecodeOutcome(Verdict.NO_CYCLE_FOUND, None, tuple(records), beliefs=beliefs, basic=first)
        try:
            fc = project_to_variables(fc)
            new_lp, new_index, _ = augment(lp, index, fc)
        except (NoProgress, DegenerateProjection) as exc:
            records.append(IterationRecord(stats, sol.status.value, sol.objective_value, fc))
            return DecodeOutcome(Verdict.FRACTIONAL_STALL, None, tuple(records), str(exc), beliefs, first)

        violation = None
        if cfg.check_cuts:
            violation = min_violation(new_lp, lp.num_rows, lp.num_vars, sol.values)
        records.append(IterationRecord(stats, sol.status.value, sol.objective_value, fc, violation))
        if violation is not None and violation <= cfg.feas_tol:
            log.warning("cycle %s does not cut off the current LP solution", fc.describe())
            return DecodeOutcome(
                Verdict.FRACTIONAL_STALL, None, tuple(records),
                f"augmentation for {fc.describe()} is satisfied by the current solution",
                beliefs,
                first,
            )
        lp, index = new_lp, new_index


def compare_paired(graph: TannerGraph, llr, cfg: LpfcConfig = LpfcConfig()) -> tuple[Assignment, DecodeOutcome]:
    """Basic LP and LP-FC on the same input; the basic result is LP-FC's first solve."""
    outcome = decode_lpfc(graph, llr, cfg)
    if outcome.basic is None:
        raise RuntimeError(f"basic LP failed: {outcome.message}")
    return outcome.basic, outcome
