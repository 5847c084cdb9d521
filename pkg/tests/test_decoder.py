import numpy as np
import pytest

from lpfc.channel import sample_llr
from lpfc.codes import TannerGraph, sample_regular
from lpfc.decoder import (
    Assignment,
    BeliefSolution,
    CliqueId,
    ParityViolation,
    build_basic_lp,
    classify,
    decode_basic,
    even_configs,
    is_ml_certificate,
)
from lpfc.harness.oracle import brute_force_ml
from lpfc.lp import solve
from oracles import point_mass

# Regression fixture: basic LP is fractional on this code and noise draw.
FIXTURE_CODE_SEED = 5
FIXTURE_LLR_SEED = 5
FIXTURE_SIGMA = 1.0
FIXTURE_FRACTIONAL = (0, 1, 3, 6, 7, 10, 11, 12, 16, 17, 18, 19)
FIXTURE_OBJECTIVE = -0.024512135583293793


def test_degree_three_check_configs():
    assert [tuple(c) for c in even_configs(3)] == [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]


def test_single_check_lp_shape():
    g = TannerGraph.from_checks(3, [(0, 1, 2)])
    lp, index = build_basic_lp(g, [1.0, 2.0, 3.0])
    assert lp.num_vars == 6 + 4
    assert len(index.cliques[CliqueId.check(0, (0, 1, 2))].cols) == 4


@pytest.mark.parametrize("n, rows, cols, nnz", [(60, 420, 480, 1920), (160, 1120, 1280, 5120)])
def test_basic_lp_size(n, rows, cols, nnz):
    # Columns: 2n variable beliefs plus 8 even configurations per degree-4 check.
    g = sample_regular(n, 3, 4, seed=1)
    assert cols == 2 * n + 8 * g.m
    lp, _ = build_basic_lp(g, np.ones(n))
    assert (lp.num_rows, lp.num_vars, lp.nonzeros) == (rows, cols, nnz)


def test_objective_touches_only_one_beliefs(small_34):
    llr = sample_llr(20, 1.0, 0)
    lp, _ = build_basic_lp(small_34, llr)
    assert np.array_equal(lp.objective[1 : 40 : 2], llr)
    assert not np.any(lp.objective[0:40:2])
    assert not np.any(lp.objective[40:])


def test_invalid_llr(small_34):
    with pytest.raises(ValueError):
        build_basic_lp(small_34, np.ones(19))
    with pytest.raises(ValueError):
        build_basic_lp(small_34, [np.nan] + [1.0] * 19)


@pytest.mark.parametrize("backend", ["highs", "simplex"])
def test_positive_llr_gives_zero_word(small_34, backend):
    a, b, stats = decode_basic(small_34, np.full(20, 0.7), backend=backend)
    assert a.is_integral and not np.any(a.bits)
    assert b.objective_value == pytest.approx(0.0, abs=1e-9)
    assert stats.cols == 40 + 8 * 15


def test_hamming_integral_outputs_match_ml(hamming):
    rng = np.random.default_rng(74)
    integral = 0
    for _ in range(200):
        llr = 2 * (1 + 0.8 * rng.standard_normal(7)) / 0.64
        a, b, _ = decode_basic(hamming, llr)
        ml_bits, ml_obj, tied = brute_force_ml(hamming, llr)
        assert b.objective_value <= ml_obj + 1e-7
        if a.is_integral:
            integral += 1
            assert is_ml_certificate(a)
            assert b.objective_value == pytest.approx(ml_obj, abs=1e-7)
            if not tied:
                assert np.array_equal(a.bits, ml_bits)
    assert integral > 150


def test_fractional_fixture():
    g = sample_regular(20, 3, 4, seed=FIXTURE_CODE_SEED)
    llr = sample_llr(20, FIXTURE_SIGMA, FIXTURE_LLR_SEED)
    a, b, _ = decode_basic(g, llr)
    assert not a.is_integral
    assert not is_ml_certificate(a)
    assert a.fractional_set == FIXTURE_FRACTIONAL
    assert b.objective_value == pytest.approx(FIXTURE_OBJECTIVE, abs=1e-7)
    # A pseudocodeword beats the best codeword.
    assert b.objective_value < brute_force_ml(g, llr)[1] - 1e-6


def test_belief_invariants_over_draws(small_34):
    for seed in range(40):
        _, b, _ = decode_basic(small_34, sample_llr(20, 1.1, seed))
        assert b.max_violation() <= 1e-7


def test_codewords_are_lp_feasible(small_34):
    lp, index = build_basic_lp(small_34, np.ones(20))
    for word in small_34.codeword_basis():
        x = point_mass(index, word, lp.num_vars)
        assert lp.residual(x) <= 1e-12
        assert lp.bound_violation(x) == 0.0


def test_classify_exact_half_is_fractional(small_34):
    beliefs = np.tile([1.0, 0.0], (20, 1))
    beliefs[3] = [0.5, 0.5]
    a = classify(small_34, BeliefSolution(beliefs, {}, 0.0))
    assert a.fractional_set == (3,)
    assert repr(a) == "Fractional([3])"


def test_classify_rejects_non_codeword():
    g = TannerGraph.from_checks(3, [(0, 1, 2)])
    beliefs = np.array([[0.0, 1.0], [1.0, 0.0], [1.0, 0.0]])
    with pytest.raises(ParityViolation):
        classify(g, BeliefSolution(beliefs, {}, 0.0))


def test_certificate_examples():
    assert is_ml_certificate(Assignment(bits=np.zeros(4, dtype=np.uint8)))
    assert not is_ml_certificate(Assignment(fractional_set=(1, 2)))


def test_backends_agree_on_fixture():
    g = sample_regular(20, 3, 4, seed=FIXTURE_CODE_SEED)
    llr = sample_llr(20, FIXTURE_SIGMA, FIXTURE_LLR_SEED)
    lp, _ = build_basic_lp(g, llr)
    a, b = solve(lp, backend="highs"), solve(lp, backend="simplex")
    assert a.objective_value == pytest.approx(b.objective_value, abs=1e-7)
