"""Command line entry point: ``lpfc {gen-code,decode,sweep,report,compare}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from lpfc.channel import sample_llr
from lpfc.codes import write_alist
from lpfc.decoder import decode_basic
from lpfc.harness.config import parse_config
from lpfc.harness.report import complexity_report, format_report
from lpfc.harness.sweep import (
    CodeSpec,
    RunConfig,
    read_trials_csv,
    run_sweep,
    trials_csv,
    wer_csv,
)
from lpfc.lpfc import LpfcConfig, compare_paired, decode_lpfc


def _add_code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--code", choices=["ensemble", "tanner155", "alist"], default="ensemble")
    p.add_argument("--alist", help="alist file for --code alist")
    p.add_argument("--n", type=int, default=60)
    p.add_argument("--dl", type=int, default=3)
    p.add_argument("--dr", type=int, default=4)
    p.add_argument("--code-seed", type=int, default=0, help="seed for ensemble sampling")


def _graph(args):
    spec = CodeSpec(args.code, args.n, args.dl, args.dr, args.alist)
    return spec.build(args.code_seed)


def _bits(x) -> str | None:
    return None if x is None else "".join(map(str, np.asarray(x, dtype=int)))


def cmd_gen_code(args) -> int:
    text = write_alist(_graph(args))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_decode(args) -> int:
    graph = _graph(args)
    llr = np.array([float(t) for t in Path(args.llr).read_text().split()])
    cfg = LpfcConfig(max_iterations=args.max_iterations, backend=args.backend)
    if args.decoder == "basic":
        a, beliefs, stats = decode_basic(graph, llr, cfg.tols, cfg.int_tol, cfg.backend)
        result = {
            "decoder": "basic",
            "integral": a.is_integral,
            "bits": _bits(a.bits),
            "fractional_set": list(a.fractional_set),
            "objective": beliefs.objective_value,
            "rows": stats.rows, "cols": stats.cols, "nonzeros": stats.nonzeros,
        }
    else:
        out = decode_lpfc(graph, llr, cfg)
        result = {"decoder": "lpfc", "verdict": out.verdict.value, "bits": _bits(out.bits),
                  "iterations": out.iterations, "trace": out.trace()}
    print(json.dumps(result, indent=2))
    return 0


def cmd_sweep(args) -> int:
    if args.config:
        cfg = parse_config(Path(args.config).read_text())
    else:
        cfg = RunConfig(
            code=CodeSpec(args.code, args.n, args.dl, args.dr, args.alist, args.fixed_code),
            sigmas=tuple(float(s) for s in args.sigmas.split(",")),
            trials=args.trials,
            seed=args.seed,
            decoder=args.decoder,
            jobs=args.jobs,
        )
    if args.out:
        cfg = RunConfig(cfg.code, cfg.sigmas, cfg.trials, cfg.seed, cfg.decoder, args.out, cfg.jobs, cfg.lpfc)
    records, points = run_sweep(cfg)
    if not cfg.out:
        sys.stdout.write(trials_csv(records))
    sys.stderr.write(wer_csv(points))
    return 0


def cmd_report(args) -> int:
    records = read_trials_csv(Path(args.trials_csv).read_text())
    sys.stdout.write(format_report(complexity_report(records)))
    return 0


def cmd_compare(args) -> int:
    graph = _graph(args)
    llr = sample_llr(graph.n, args.sigma, args.seed)
    basic, out = compare_paired(graph, llr, LpfcConfig(max_iterations=args.max_iterations))
    result = {
        "sigma": args.sigma,
        "seed": args.seed,
        "basic": {"integral": basic.is_integral, "bits": _bits(basic.bits),
                  "fractional_set": list(basic.fractional_set)},
        "lpfc": {"verdict": out.verdict.value, "bits": _bits(out.bits),
                 "iterations": out.iterations, "message": out.message, "trace": out.trace()},
    }
    print(json.dumps(result, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpfc", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-code", help="write a code as alist")
    _add_code_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_code)

    p = sub.add_parser("decode", help="decode one LLR vector (one value per line)")
    _add_code_args(p)
    p.add_argument("--llr", required=True)
    p.add_argument("--decoder", choices=["basic", "lpfc"], default="lpfc")
    p.add_argument("--backend", choices=["highs", "simplex"], default="highs")
    p.add_argument("--max-iterations", type=int, default=50)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("sweep", help="paired WER sweep")
    _add_code_args(p)
    p.add_argument("--config", help="key=value run configuration")
    p.add_argument("--sigmas", default="1.0")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--decoder", choices=["both", "basic"], default="both")
    p.add_argument("--fixed-code", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="trial CSV path; a *_wer.csv summary is written beside it")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="complexity table from a trial CSV")
    p.add_argument("trials_csv")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("compare", help="paired decode of one noise draw with full trace")
    _add_code_args(p)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iterations", type=int, default=50)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
