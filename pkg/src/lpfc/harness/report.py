"""Complexity tables in the layout of the LP vs LP-FC comparison."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from lpfc.harness.sweep import TrialRecord


@dataclass(frozen=True)
class ComplexityRow:
    sigma: float
    ebn0_db: float
    trials: int
    basic_failures: int
    avg_lps: float
    avg_base_nnz: float
    avg_final_nnz: float
    max_final_nnz: int
    avg_base_dims: tuple[float, float]
    avg_final_dims: tuple[float, float]

    @property
    def nnz_growth(self) -> float:
        return self.avg_final_nnz / self.avg_base_nnz - 1.0 if self.avg_base_nnz else 0.0


def complexity_report(records: Sequence[TrialRecord]) -> list[ComplexityRow]:
    """Per-sigma LP-FC cost over the trials where the basic LP did not return an integral word.

    Trials where the basic LP was integral need a single solve and are
    excluded from the averages, as are sigmas with no such trials.
    """
    by_sigma: dict[float, list[TrialRecord]] = {}
    for r in records:
        by_sigma.setdefault(r.sigma, []).append(r)
    rows = []
    for sigma, recs in by_sigma.items():
        hard = [r for r in recs if r.lpfc_iters is not None and r.lpfc_iters > 1]
        if not hard:
            continue
        rows.append(
            ComplexityRow(
                sigma=sigma,
                ebn0_db=recs[0].ebn0_db,
                trials=len(recs),
                basic_failures=sum(not r.basic_ok for r in recs),
                avg_lps=float(np.mean([r.lpfc_iters for r in hard])),
                avg_base_nnz=float(np.mean([r.base_nnz for r in hard])),
                avg_final_nnz=float(np.mean([r.final_nnz for r in hard])),
                max_final_nnz=max(r.final_nnz for r in hard),
                avg_base_dims=(float(np.mean([r.base_rows for r in hard])),
                               float(np.mean([r.base_cols for r in hard]))),
                avg_final_dims=(float(np.mean([r.final_rows for r in hard])),
                                float(np.mean([r.final_cols for r in hard]))),
            )
        )
    return rows


def format_report(rows: Sequence[ComplexityRow]) -> str:
    head = (f"{'SNR(dB)':>8} {'LPs(avg)':>9} {'nnz LP':>9} {'nnz LP-FC':>10} "
            f"{'nnz max':>8} {'dims LP':>14} {'dims LP-FC':>16}")
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(
            f"{r.ebn0_db:8.2f} {r.avg_lps:9.2f} {r.avg_base_nnz:9.0f} {r.avg_final_nnz:10.0f} "
            f"{r.max_final_nnz:8d} {'(%d,%d)' % tuple(round(v) for v in r.avg_base_dims):>14} "
            f"{'(%d,%d)' % tuple(round(v) for v in r.avg_final_dims):>16}"
        )
    return "\n".join(lines) + "\n"
