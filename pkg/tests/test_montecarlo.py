import math

import numpy as np
import pytest

from weaktyp.core import bsc
from weaktyp.decoders import DecodeOutcome
from weaktyp.montecarlo import (
    PeEstimate,
    TrialConfig,
    TrialRecord,
    error_exponent,
    estimate_pe,
    estimate_pe_adaptive,
    exhaustive_pe,
    exponent,
    fixed_codebook,
    run_trial,
    run_trials,
    trial_detail,
)


def cfg_noiseless():
    return TrialConfig(n=50, m=2, q=0.5, channel=bsc(0.0), eps=0.1, master_seed=101)


def cfg_oracle(seed=20260809):
    return TrialConfig(
        n=6, m=2, q=0.5, channel=bsc(0.1), eps=0.3, codebook_mode="fixed", master_seed=seed
    )


def test_run_trial_noiseless_both_correct():
    cfg = cfg_noiseless()
    for t in range(20):
        rec = run_trial(cfg, t)
        assert rec.jt_outcome.decoded == rec.true_w
        assert rec.weak_outcome.decoded == rec.true_w


def test_run_trial_deterministic():
    cfg = TrialConfig(n=30, m=4, q=0.5, channel=bsc(0.1), eps=0.3, master_seed=55)
    a = run_trial(cfg, 17)
    b = run_trial(cfg, 17)
    assert a == b


def test_batch_equals_single_trial_loop():
    configs = [
        TrialConfig(n=25, m=4, q=0.5, channel=bsc(0.05), eps=0.8, master_seed=7),
        TrialConfig(n=20, m=3, q=0.3, channel=bsc(0.4), eps=0.1, master_seed=8),
        TrialConfig(n=20, m=3, q=0.3, channel=bsc(0.4), eps=0.1, master_seed=8, resolver="svm"),
        TrialConfig(
            n=20, m=3, q=0.3, channel=bsc(0.4), eps=0.1, master_seed=8, resolver="cluster-random"
        ),
        cfg_oracle(),
    ]
    for cfg in configs:
        batch = run_trials(cfg, 120)
        for t in range(120):
            rec = run_trial(cfg, t)
            assert rec.true_w == batch.true_w[t]
            assert rec.jt_outcome.decoded == batch.jt_decoded[t]
            assert rec.weak_outcome.decoded == batch.weak_decoded[t]
            assert rec.candidate_count == batch.candidate_counts[t]


def test_estimate_noiseless_floors_at_one_over_trials():
    pe_jt, pe_weak = estimate_pe(cfg_noiseless(), 500)
    for pe in (pe_jt, pe_weak):
        assert pe.zero_error
        assert pe.errors == 0
        assert pe.pe_hat == 1 / 500


def test_estimate_dominance_everywhere():
    for cfg in (
        TrialConfig(n=30, m=4, q=0.5, channel=bsc(0.4), eps=0.1, master_seed=1),
        TrialConfig(n=25, m=4, q=0.5, channel=bsc(0.05), eps=0.8, master_seed=2),
    ):
        pe_jt, pe_weak = estimate_pe(cfg, 3000)
        assert pe_weak.pe_hat <= pe_jt.pe_hat


def test_pe_estimate_invariants():
    pe = PeEstimate.from_counts(1000, 17)
    assert pe.pe_hat == 17 / 1000 and not pe.zero_error
    pe = PeEstimate.from_counts(1000, 0)
    assert pe.pe_hat == 1 / 1000 and pe.zero_error
    with pytest.raises(ValueError):
        PeEstimate.from_counts(0, 0)
    with pytest.raises(ValueError):
        PeEstimate.from_counts(10, 11)


def test_trial_record_rejects_dominance_violation():
    ok = DecodeOutcome(decoded=2, candidate_count=1, path="unique")
    bad = DecodeOutcome(decoded=0, candidate_count=0, path="none")
    with pytest.raises(ValueError):
        TrialRecord(trial_id=0, true_w=2, jt_outcome=ok, weak_outcome=bad, candidate_count=1)


def test_exponent_arithmetic_identity():
    assert abs(error_exponent(math.exp(-6.0), 100) - 0.06) < 1e-15
    assert error_exponent(1.0, 10) == 0.0
    assert abs(error_exponent(0.01, 50) - (-math.log(0.01) / 50)) < 1e-15


def test_exponent_rejects_bad_inputs():
    with pytest.raises(ValueError):
        error_exponent(0.0, 10)
    with pytest.raises(ValueError):
        error_exponent(1.1, 10)
    with pytest.raises(ValueError):
        error_exponent(0.5, 0)


def test_exponent_point_fields():
    pe = PeEstimate.from_counts(1000, 10)
    point = exponent(pe, 50, 4)
    assert point.n == 50
    assert abs(point.rate - math.log2(4) / 50) < 1e-15
    assert point.exponent == error_exponent(0.01, 50)
    assert point.pe is pe


def test_exhaustive_noiseless_is_errorless():
    cfg = TrialConfig(
        n=6, m=2, q=0.5, channel=bsc(0.0), eps=0.1, codebook_mode="fixed", master_seed=20260809
    )
    cb = fixed_codebook(cfg)
    assert not np.array_equal(cb.words[0], cb.words[1])
    assert exhaustive_pe(cfg) == (0.0, 0.0)


def test_exhaustive_all_erasure_instance():
    # at q=0.3 the x-condition lattice never hits h2(0.3): nothing is
    # typical at tiny eps and every trial yields the dummy index
    cfg = TrialConfig(
        n=6, m=2, q=0.3, channel=bsc(0.1), eps=1e-9, codebook_mode="fixed", master_seed=3
    )
    exact_jt, exact_weak = exhaustive_pe(cfg)
    assert abs(exact_jt - 1.0) < 1e-10 and abs(exact_weak - 1.0) < 1e-10
    pe_jt, pe_weak = estimate_pe(cfg, 300)
    assert pe_jt.pe_hat == 1.0 and pe_weak.pe_hat == 1.0


def test_exhaustive_matches_monte_carlo_with_resolution():
    # master seed 5 draws codewords at distance 2, so multi-candidate sets
    # occur and the weak decoder is strictly better in exact arithmetic
    cfg = cfg_oracle(seed=5)
    exact_jt, exact_weak = exhaustive_pe(cfg)
    assert exact_weak < exact_jt
    trials = 50_000
    mc_jt, mc_weak = estimate_pe(cfg, trials)
    for exact, mc in ((exact_jt, mc_jt), (exact_weak, mc_weak)):
        band = 3.0 * math.sqrt(exact * (1.0 - exact) / trials)
        assert abs(mc.pe_hat - exact) <= band


def test_exhaustive_rejects_bad_instances():
    with pytest.raises(ValueError):
        exhaustive_pe(TrialConfig(n=20, m=2, q=0.5, channel=bsc(0.1), eps=0.3, codebook_mode="fixed"))
    with pytest.raises(ValueError):
        exhaustive_pe(TrialConfig(n=6, m=2, q=0.5, channel=bsc(0.1), eps=0.3))  # redraw mode


def test_adaptive_estimation_reaches_error_target():
    cfg = TrialConfig(n=20, m=4, q=0.5, channel=bsc(0.4), eps=0.1, master_seed=9)
    pe_jt, pe_weak = estimate_pe_adaptive(cfg, min_errors=50, max_trials=100_000)
    assert pe_jt.errors >= 50 and pe_weak.errors >= 50
    assert pe_jt.trials == pe_weak.trials <= 100_000


def test_adaptive_estimation_respects_cap():
    pe_jt, pe_weak = estimate_pe_adaptive(cfg_noiseless(), min_errors=5, max_trials=600)
    assert pe_jt.trials == 600
    assert pe_jt.zero_error and pe_weak.zero_error


def test_trial_detail_consistent_with_run_trial():
    cfg = TrialConfig(n=50, m=4, q=0.5, channel=bsc(0.4), eps=0.1, master_seed=20260809)
    detail = trial_detail(cfg, 0)
    rec = run_trial(cfg, 0)
    assert detail.record == rec
    assert detail.candidates.count == rec.candidate_count
    assert detail.candidates.count >= 2  # chosen trial exercises resolution
    assert rec.jt_outcome.decoded == 0
    assert rec.weak_outcome.decoded in detail.candidates.indices


def test_config_validation():
    with pytest.raises(ValueError):
        TrialConfig(n=0, m=2, q=0.5, channel=bsc(0.1), eps=0.1)
    with pytest.raises(ValueError):
        TrialConfig(n=5, m=1, q=0.5, channel=bsc(0.1), eps=0.1)
    with pytest.raises(ValueError):
        TrialConfig(n=5, m=2, q=0.0, channel=bsc(0.1), eps=0.1)
    with pytest.raises(ValueError):
        TrialConfig(n=5, m=2, q=0.5, channel=bsc(0.1), eps=0.0)
    with pytest.raises(ValueError):
        TrialConfig(n=5, m=2, q=0.5, channel=bsc(0.1), eps=0.1, resolver="nope")
    with pytest.raises(ValueError):
        TrialConfig(n=5, m=2, q=0.5, channel=bsc(0.1), eps=0.1, codebook_mode="nope")
