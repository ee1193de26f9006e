import numpy as np
import pytest

from weaktyp.core import bsc
from weaktyp.kernels import NUMBA_AVAILABLE, active_backend, thread_cap
from weaktyp.montecarlo import TrialConfig, run_trials

needs_numba = pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")

CONFIGS = [
    TrialConfig(n=25, m=4, q=0.5, channel=bsc(0.05), eps=0.8, master_seed=7),
    TrialConfig(n=60, m=4, q=0.3, channel=bsc(0.4), eps=0.1, master_seed=11),
    TrialConfig(n=12, m=3, q=0.7, channel=bsc(0.0), eps=0.1, master_seed=3),
    TrialConfig(n=12, m=3, q=0.7, channel=bsc(1.0), eps=0.1, master_seed=3),
    TrialConfig(n=1, m=2, q=0.5, channel=bsc(0.2), eps=0.5, master_seed=13),
    TrialConfig(n=7, m=2, q=0.01, channel=bsc(0.3), eps=0.2, master_seed=17),
    TrialConfig(n=6, m=2, q=0.5, channel=bsc(0.1), eps=0.3, codebook_mode="fixed", master_seed=5),
]


def _batches_equal(a, b):
    return (
        np.array_equal(a.true_w, b.true_w)
        and np.array_equal(a.jt_decoded, b.jt_decoded)
        and np.array_equal(a.weak_decoded, b.weak_decoded)
        and np.array_equal(a.candidate_counts, b.candidate_counts)
    )


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("WEAKTYP_BACKEND", "numpy")
    assert active_backend() == "numpy"
    monkeypatch.setenv("WEAKTYP_BACKEND", "bogus")
    with pytest.raises(ValueError):
        active_backend()
    monkeypatch.delenv("WEAKTYP_BACKEND")
    assert active_backend() in ("numpy", "numba")


def test_thread_cap_parsing(monkeypatch):
    monkeypatch.delenv("WEAKTYP_THREADS", raising=False)
    assert thread_cap() == 0
    monkeypatch.setenv("WEAKTYP_THREADS", "3")
    assert thread_cap() == 3
    monkeypatch.setenv("WEAKTYP_THREADS", "zero")
    with pytest.raises(ValueError):
        thread_cap()
    monkeypatch.setenv("WEAKTYP_THREADS", "-1")
    with pytest.raises(ValueError):
        thread_cap()


@needs_numba
@pytest.mark.parametrize("cfg", CONFIGS)
def test_backends_bit_identical(monkeypatch, cfg):
    monkeypatch.setenv("WEAKTYP_BACKEND", "numpy")
    a = run_trials(cfg, 2000)
    monkeypatch.setenv("WEAKTYP_BACKEND", "numba")
    b = run_trials(cfg, 2000)
    assert _batches_equal(a, b)


@needs_numba
def test_thread_count_invariance(monkeypatch):
    cfg = TrialConfig(n=40, m=4, q=0.5, channel=bsc(0.4), eps=0.1, master_seed=23)
    monkeypatch.setenv("WEAKTYP_BACKEND", "numba")
    monkeypatch.setenv("WEAKTYP_THREADS", "1")
    a = run_trials(cfg, 4000)
    monkeypatch.setenv("WEAKTYP_THREADS", "2")
    b = run_trials(cfg, 4000)
    monkeypatch.setenv("WEAKTYP_THREADS", "0")
    c = run_trials(cfg, 4000)
    assert _batches_equal(a, b)
    assert _batches_equal(a, c)


def test_chunking_invariance(monkeypatch):
    # results must not depend on how trials are grouped into kernel calls
    monkeypatch.setenv("WEAKTYP_BACKEND", "numpy")
    cfg = TrialConfig(n=15, m=3, q=0.4, channel=bsc(0.2), eps=0.4, master_seed=29)
    a = run_trials(cfg, 1000, chunk_size=64)
    b = run_trials(cfg, 1000, chunk_size=1000)
    assert _batches_equal(a, b)


def test_start_offset_slices_the_same_stream(monkeypatch):
    monkeypatch.setenv("WEAKTYP_BACKEND", "numpy")
    cfg = TrialConfig(n=15, m=3, q=0.4, channel=bsc(0.2), eps=0.4, master_seed=29)
    whole = run_trials(cfg, 300)
    tail = run_trials(cfg, 100, start=200)
    assert np.array_equal(whole.true_w[200:], tail.true_w)
    assert np.array_equal(whole.weak_decoded[200:], tail.weak_decoded)
