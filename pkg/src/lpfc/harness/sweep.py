"""Paired basic-LP / LP-FC Monte Carlo sweeps over a sigma grid."""

from __future__ import annotations

import csv
import io
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from lpfc.channel import sample_llr, sigma_to_ebn0_db
from lpfc.codes import TannerGraph, build_tanner155, load_alist, sample_regular
from lpfc.decoder import DecoderError, decode_basic
from lpfc.lpfc import DecodeOutcome, LpfcConfig, decode_lpfc

TRIAL_HEADER = (
    "sigma,ebn0_db,trial,seed,basic_ok,lpfc_ok,lpfc_iters,base_nnz,final_nnz,"
    "base_rows,base_cols,final_rows,final_cols,cycle_lengths"
).split(",")
WER_HEADER = "sigma,ebn0_db,trials,basic_fail,lpfc_fail,basic_wer,lpfc_wer".split(",")

_CODE_STREAM = 0xC0DE


@dataclass(frozen=True)
class CodeSpec:
    kind: str = "ensemble"
    n: int = 60
    d_l: int = 3
    d_r: int = 4
    path: str | None = None
    fixed: bool = False

    def __post_init__(self):
        if self.kind not in ("ensemble", "tanner155", "alist"):
            raise ValueError(f"unknown code kind {self.kind!r}")
        if self.kind == "alist" and not self.path:
            raise ValueError("alist codes need a path")

    @property
    def resampled(self) -> bool:
        return self.kind == "ensemble" and not self.fixed

    def design_rate(self, graph: TannerGraph | None = None) -> float:
        if self.kind == "ensemble":
            return 1.0 - self.d_l / self.d_r
        if self.kind == "tanner155":
            return 2.0 / 5.0
        if graph is None:
            graph = self.build(0)
        return 1.0 - graph.m / graph.n

    def build(self, seed: int) -> TannerGraph:
        if self.kind == "ensemble":
            return sample_regular(self.n, self.d_l, self.d_r, seed)
        if self.kind == "tanner155":
            return build_tanner155()
        return load_alist(Path(self.path).read_text())


@dataclass(frozen=True)
class RunConfig:
    code: CodeSpec = CodeSpec()
    sigmas: tuple[float, ...] = (1.0,)
    trials: int = 100
    seed: int = 0
    decoder: str = "both"
    out: str | None = None
    jobs: int = 1
    lpfc: LpfcConfig = LpfcConfig()

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.sigmas or any(s <= 0 for s in self.sigmas):
            raise ValueError("sigma grid must be nonempty and positive")
        if self.decoder not in ("both", "basic"):
            raise ValueError("decoder must be 'both' or 'basic'")


def derive_seed(master: int, sigma_index: int, trial: int) -> int:
    """64-bit trial seed, a pure function of its three inputs."""
    ss = np.random.SeedSequence([master & (2**64 - 1), sigma_index, trial])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def code_seed(trial_seed: int) -> int:
    ss = np.random.SeedSequence([trial_seed, _CODE_STREAM])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class TrialRecord:
    sigma: float
    ebn0_db: float
    sigma_index: int
    trial: int
    seed: int
    basic_verdict: str
    basic_ok: bool
    lpfc_verdict: str | None = None
    lpfc_ok: bool | None = None
    lpfc_iters: int | None = None
    base_nnz: int = 0
    final_nnz: int = 0
    base_rows: int = 0
    base_cols: int = 0
    final_rows: int = 0
    final_cols: int = 0
    cycle_lengths: list[int] = field(default_factory=list)
    basic_time: float = 0.0
    lpfc_time: float = 0.0
    objectives: list[float] = field(default_factory=list, repr=False)

    def csv_row(self) -> list[str]:
        def opt(v):
            return "" if v is None else str(int(v))

        return [
            repr(self.sigma), repr(self.ebn0_db), str(self.trial), str(self.seed),
            str(int(self.basic_ok)), opt(self.lpfc_ok), opt(self.lpfc_iters),
            str(self.base_nnz), str(self.final_nnz), str(self.base_rows), str(self.base_cols),
            str(self.final_rows), str(self.final_cols),
            ";".join(map(str, self.cycle_lengths)),
        ]

    @classmethod
    def from_csv(cls, row: dict, sigma_index: int = 0) -> TrialRecord:
        def opt(v):
            return None if v == "" else int(v)

        lpfc_ok = opt(row["lpfc_ok"])
        return cls(
            sigma=float(row["sigma"]), ebn0_db=float(row["ebn0_db"]), sigma_index=sigma_index,
            trial=int(row["trial"]), seed=int(row["seed"]),
            basic_verdict="", basic_ok=bool(int(row["basic_ok"])),
            lpfc_ok=None if lpfc_ok is None else bool(lpfc_ok), lpfc_iters=opt(row["lpfc_iters"]),
            base_nnz=int(row["base_nnz"]), final_nnz=int(row["final_nnz"]),
            base_rows=int(row["base_rows"]), base_cols=int(row["base_cols"]),
            final_rows=int(row["final_rows"]), final_cols=int(row["final_cols"]),
            cycle_lengths=[int(v) for v in row["cycle_lengths"].split(";") if v],
        )


@dataclass(frozen=True)
class WerPoint:
    sigma: float
    ebn0_db: float
    trials: int
    basic_failures: int
    lpfc_failures: int | None

    @property
    def basic_wer(self) -> float:
        return self.basic_failures / self.trials

    @property
    def lpfc_wer(self) -> float | None:
        return None if self.lpfc_failures is None else self.lpfc_failures / self.trials

    def csv_row(self) -> list[str]:
        lf = "" if self.lpfc_failures is None else str(self.lpfc_failures)
        lw = "" if self.lpfc_wer is None else repr(self.lpfc_wer)
        return [repr(self.sigma), repr(self.ebn0_db), str(self.trials),
                str(self.basic_failures), lf, repr(self.basic_wer), lw]


def run_trial(cfg: RunConfig, sigma_index: int, trial: int, graph: TannerGraph | None = None) -> TrialRecord:
    sigma = cfg.sigmas[sigma_index]
    seed = derive_seed(cfg.seed, sigma_index, trial)
    if graph is None:
        graph = cfg.code.build(code_seed(seed))
    rate = cfg.code.design_rate(graph)
    llr = sample_llr(graph.n, sigma, seed)
    rec = TrialRecord(sigma, sigma_to_ebn0_db(sigma, rate), sigma_index, trial, seed, "", False)

    t0 = time.perf_counter()
    try:
        basic, _, stats = decode_basic(graph, llr, cfg.lpfc.tols, cfg.lpfc.int_tol, cfg.lpfc.backend)
        rec.basic_verdict = "Integral" if basic.is_integral else "Fractional"
        rec.basic_ok = basic.is_integral and not np.any(basic.bits)
        rec.base_nnz, rec.base_rows, rec.base_cols = stats.nonzeros, stats.rows, stats.cols
    except DecoderError:
        rec.basic_verdict = "SolverFailure"
    rec.basic_time = time.perf_counter() - t0
    if cfg.decoder == "basic":
        rec.final_nnz, rec.final_rows, rec.final_cols = rec.base_nnz, rec.base_rows, rec.base_cols
        return rec

    t0 = time.perf_counter()
    out: DecodeOutcome = decode_lpfc(graph, llr, cfg.lpfc)
    rec.lpfc_time = time.perf_counter() - t0
    rec.lpfc_verdict = out.verdict.value
    rec.lpfc_ok = out.is_all_zero()
    rec.lpfc_iters = out.iterations
    first, last = out.per_iteration[0].stats, out.per_iteration[-1].stats
    if rec.basic_verdict == "SolverFailure":
        rec.base_nnz, rec.base_rows, rec.base_cols = first.nonzeros, first.rows, first.cols
    rec.final_nnz, rec.final_rows, rec.final_cols = last.nonzeros, last.rows, last.cols
    rec.cycle_lengths = [r.cycle_length for r in out.per_iteration if r.cycle is not None]
    rec.objectives = [r.objective for r in out.per_iteration]
    return rec


def _run_chunk(args) -> list[TrialRecord]:
    cfg, tasks = args
    fixed = None if cfg.code.resampled else cfg.code.build(code_seed(cfg.seed))
    return [run_trial(cfg, si, t, fixed) for si, t in tasks]


def run_sweep(cfg: RunConfig) -> tuple[list[TrialRecord], list[WerPoint]]:
    """Run every (sigma, trial) pair; records come back ordered by (sigma index, trial)."""
    tasks = [(si, t) for si in range(len(cfg.sigmas)) for t in range(cfg.trials)]
    if cfg.jobs <= 1:
        records = _run_chunk((cfg, tasks))
    else:
        chunks = [tasks[k :: cfg.jobs * 4] for k in range(cfg.jobs * 4)]
        with ProcessPoolExecutor(cfg.jobs) as pool:
            records = [r for part in pool.map(_run_chunk, [(cfg, c) for c in chunks]) for r in part]
    records.sort(key=lambda r: (r.sigma_index, r.trial))
    points = aggregate(records)
    if cfg.out:
        write_outputs(cfg.out, records, points)
    return records, points


def aggregate(records: Iterable[TrialRecord]) -> list[WerPoint]:
    groups: dict[float, list[TrialRecord]] = {}
    for r in records:
        groups.setdefault(r.sigma, []).append(r)
    points = []
    for sigma, recs in groups.items():
        lpfc = None
        if all(r.lpfc_ok is not None for r in recs):
            lpfc = sum(not r.lpfc_ok for r in recs)
        points.append(WerPoint(sigma, recs[0].ebn0_db, len(recs), sum(not r.basic_ok for r in recs), lpfc))
    return points


def trials_csv(records: Sequence[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRIAL_HEADER)
    w.writerows(r.csv_row() for r in records)
    return buf.getvalue()


def wer_csv(points: Sequence[WerPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(WER_HEADER)
    w.writerows(p.csv_row() for p in points)
    return buf.getvalue()


def read_trials_csv(text: str) -> list[TrialRecord]:
    rows = list(csv.DictReader(io.StringIO(text)))
    if rows and list(rows[0].keys()) != TRIAL_HEADER:
        raise ValueError("unexpected trial CSV header")
    sigma_order: dict[float, int] = {}
    out = []
    for row in rows:
        si = sigma_order.setdefault(float(row["sigma"]), len(sigma_order))
        out.append(TrialRecord.from_csv(row, si))
    return out


def write_outputs(out: str, records: Sequence[TrialRecord], points: Sequence[WerPoint]) -> tuple[Path, Path]:
    """Write ``<out>`` (per-trial CSV) and ``<stem>_wer.csv`` next to it."""
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(trials_csv(records))
    wer = path.with_name(path.stem + "_wer.csv")
    wer.write_text(wer_csv(points))
    return path, wer
