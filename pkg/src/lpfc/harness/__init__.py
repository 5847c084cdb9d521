"""Monte Carlo experiments, the ML oracle, reporting, and the CLI."""

from lpfc.harness.oracle import brute_force_ml, codewords
from lpfc.harness.report import complexity_report, format_report
from lpfc.harness.sweep import (
    CodeSpec,
    RunConfig,
    TrialRecord,
    WerPoint,
    aggregate,
    derive_seed,
    run_sweep,
)

__all__ = [
    "CodeSpec",
    "RunConfig",
    "TrialRecord",
    "WerPoint",
    "aggregate",
    "brute_force_ml",
    "codewords",
    "complexity_report",
    "derive_seed",
    "format_report",
    "run_sweep",
]
