"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; conftest prints them in the terminal summary.
"""

import numpy as np
import pytest

from lpfc.channel import sample_llr, sigma_to_ebn0_db
from lpfc.codes import build_tanner155, hamming74, sample_regular
from lpfc.decoder import BeliefSolution, decode_basic
from lpfc.frustration import EPS, build_implication_graph, find_frustrated_cycle
from lpfc.harness.oracle import brute_force_ml
from lpfc.harness.sweep import CodeSpec, RunConfig, code_seed, derive_seed, run_sweep, trials_csv
from lpfc.lpfc import LpfcConfig, Verdict, compare_paired, decode_lpfc
from oracles import forced_by_path, point_mass, witness_is_sound

RESULTS: list[str] = []


def verdict(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


# -- 1 -------------------------------------------------------------------------

TABLE_SNR = {0.9: 3.93, 0.95: 3.46, 1.00: 3.01, 1.05: 2.59, 1.10: 2.18, 1.15: 1.79, 1.20: 1.43}


def test_criterion_1_ebn0_table():
    errors = {s: sigma_to_ebn0_db(s, 0.25) - db for s, db in TABLE_SNR.items()}
    bad = {s: round(e, 4) for s, e in errors.items() if abs(e) > 0.005}
    verdict(1, not bad, f"max |error| {max(map(abs, errors.values())):.4f} dB; outside ±0.005: {bad or 'none'}")


# -- 2, 3 ----------------------------------------------------------------------

SUITE_CODES = {"hamming74": hamming74(), "regular20": sample_regular(20, 3, 4, seed=5)}


@pytest.fixture(scope="module")
def certificate_suite():
    """Every (code, sigma, draw) of the ML-certificate suite with its basic-LP result."""
    out = []
    for ci, (name, g) in enumerate(SUITE_CODES.items()):
        assert g.dimension <= 6
        for si, sigma in enumerate((0.8, 1.2)):
            for t in range(1000):
                llr = sample_llr(g.n, sigma, derive_seed(100 + ci, si, t))
                a, b, _ = decode_basic(g, llr)
                out.append((g, llr, a, b))
    return out


def test_criterion_2_ml_certificate(certificate_suite):
    integral = mismatched = 0
    worst = 0.0
    for g, llr, a, b in certificate_suite:
        if not a.is_integral:
            continue
        integral += 1
        bits, obj, tied = brute_force_ml(g, llr)
        worst = max(worst, abs(b.objective_value - obj))
        if not np.array_equal(a.bits, bits) and not tied:
            mismatched += 1
    ok = integral > 0 and mismatched == 0 and worst <= 1e-7
    verdict(2, ok, f"{integral}/{len(certificate_suite)} integral; {mismatched} mismatches; max objective gap {worst:.1e}")


def test_criterion_3_integral_means_no_frustration(certificate_suite):
    violations = integral = 0
    for _, _, a, b in certificate_suite:
        if a.is_integral:
            integral += 1
            violations += find_frustrated_cycle(build_implication_graph(b)) is not None
    verdict(3, violations == 0, f"{violations} frustrated cycles over {integral} integral solves")


# -- 4, 5 ----------------------------------------------------------------------


@pytest.fixture(scope="module")
def fractional_runs():
    """LP-FC runs (with every LP kept) on the first 100 fractional draws at sigma 1.1, n=60."""
    runs = []
    t = 0
    while len(runs) < 100:
        seed = derive_seed(2024, 0, t)
        t += 1
        g = sample_regular(60, 3, 4, code_seed(seed))
        llr = sample_llr(60, 1.1, seed)
        a, _, _ = decode_basic(g, llr)
        if a.is_integral:
            continue
        lps = []
        out = decode_lpfc(g, llr, LpfcConfig(), keep_lps=lps)
        runs.append((g, out, lps))
    return runs


def test_criterion_4_frustration_soundness(fractional_runs):
    cycles = violations = 0
    for _, out, lps in fractional_runs:
        for rec, (_, index, sol) in zip(out.per_iteration, lps):
            if rec.cycle is None:
                continue
            b = BeliefSolution.from_values(index, sol.values, sol.objective_value)
            fc = rec.cycle
            cycles += 1
            sound = witness_is_sound(b, fc, EPS)
            sound &= forced_by_path(b, list(fc.witness), list(fc.cycle_sources), EPS)
            violations += not sound
    ok = len(fractional_runs) >= 100 and violations == 0
    verdict(4, ok, f"{cycles} cycles over {len(fractional_runs)} fractional instances; {violations} unsound")


def test_criterion_5_tightening(fractional_runs):
    drops = infeasible = ineffective = solves = 0
    worst_residual = 0.0
    for g, out, lps in fractional_runs:
        objs = [r.objective for r in out.per_iteration]
        drops += sum(b < a - 1e-7 for a, b in zip(objs, objs[1:]))
        zero = np.zeros(g.n, dtype=int)
        for lp, index, _ in lps:
            solves += 1
            res = lp.residual(point_mass(index, zero, lp.num_vars))
            worst_residual = max(worst_residual, res)
            infeasible += res > 1e-9
        ineffective += sum(
            r.cut_violation is not None and r.cut_violation <= 1e-7 for r in out.per_iteration
        )
        ineffective += out.verdict is Verdict.FRACTIONAL_STALL
    ok = drops == infeasible == ineffective == 0
    verdict(
        5, ok,
        f"{solves} LPs; {drops} objective drops; zero-word residual max {worst_residual:.1e}; "
        f"{ineffective} ineffective cuts",
    )


# -- 6, 7, 9 -------------------------------------------------------------------

PAIRED = RunConfig(code=CodeSpec(n=60), sigmas=(1.0, 1.1), trials=500, seed=0)


@pytest.fixture(scope="module")
def paired_sweep():
    return run_sweep(PAIRED)


def test_criterion_6_dominance(paired_sweep):
    records, points = paired_sweep
    dominance = all(p.lpfc_failures <= p.basic_failures for p in points)
    per_trial = all(r.lpfc_ok for r in records if r.basic_ok)
    rescued = sum(r.basic_verdict == "Fractional" and r.lpfc_ok for r in records)
    summary = "; ".join(f"sigma {p.sigma}: basic {p.basic_failures} lpfc {p.lpfc_failures}" for p in points)
    verdict(6, dominance and per_trial and rescued >= 5, f"{summary}; {rescued} fractional->all-zero rescues")


def test_criterion_7_lp_budget(paired_sweep):
    failed = [r for r in paired_sweep[0] if not r.basic_ok]
    mean_lps = float(np.mean([r.lpfc_iters for r in failed]))
    growth = float(np.mean([r.final_nnz for r in failed]) / np.mean([r.base_nnz for r in failed]) - 1)
    ok = 1 <= mean_lps <= 20 and growth <= 0.15
    verdict(7, ok, f"{len(failed)} basic failures; mean LP solves {mean_lps:.2f} (band [1,20]); nonzero growth {growth:.1%} (band <=15%)")


def test_criterion_9_determinism(paired_sweep):
    again, _ = run_sweep(PAIRED)
    first = trials_csv(paired_sweep[0])
    verdict(9, trials_csv(again) == first, f"{len(first.encode())} bytes compared")


# -- 8 -------------------------------------------------------------------------


def test_criterion_8_tanner155():
    g = build_tanner155()
    structure = (g.n, g.m) == (155, 93) and g.is_regular(3, 5) and g.rank() == 91 and g.dimension == 64
    llr = sample_llr(155, 0.9, derive_seed(0, 0, 0))
    basic, out = compare_paired(g, llr)
    dominance = not basic.is_integral or (out.success and out.iterations == 1 and np.array_equal(out.bits, basic.bits))
    completed = out.verdict is not Verdict.SOLVER_FAILURE
    verdict(
        8, structure and dominance and completed,
        f"n={g.n} m={g.m} rank={g.rank()} k={g.dimension}; basic {'integral' if basic.is_integral else 'fractional'}, "
        f"LP-FC {out.verdict.value} after {out.iterations} solves",
    )
