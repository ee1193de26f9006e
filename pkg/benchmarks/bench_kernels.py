#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy twin.

Runs the trial-simulation bulk on both backends over figure-sized
workloads, checks the outputs are bit-identical, and prints a timing
table.  Invoke directly:

    python benchmarks/bench_kernels.py [--trials 20000]
"""

import argparse
import os
import time

import numpy as np

from weaktyp.core import bsc
from weaktyp.kernels import NUMBA_AVAILABLE
from weaktyp.montecarlo import TrialConfig, run_trials

WORKLOADS = [
    ("fig12-style n=25", TrialConfig(n=25, m=4, q=0.5, channel=bsc(0.05), eps=0.8, master_seed=1)),
    ("fig12-style n=200", TrialConfig(n=200, m=4, q=0.5, channel=bsc(0.05), eps=0.8, master_seed=1)),
    ("fig3-style n=60", TrialConfig(n=60, m=4, q=0.5, channel=bsc(0.4), eps=0.1, master_seed=1)),
    ("fig3-style n=120", TrialConfig(n=120, m=4, q=0.3, channel=bsc(0.4), eps=0.1, master_seed=1)),
    ("full-scale n=600", TrialConfig(n=600, m=4, q=0.5, channel=bsc(0.4), eps=0.1, master_seed=1)),
]


def run_backend(backend: str, cfg: TrialConfig, trials: int):
    os.environ["WEAKTYP_BACKEND"] = backend
    start = time.perf_counter()
    batch = run_trials(cfg, trials)
    elapsed = time.perf_counter() - start
    return elapsed, batch


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=20000)
    args = parser.parse_args()

    if not NUMBA_AVAILABLE:
        print("numba is not importable; nothing to compare")
        return 1

    # warm up the jit compiler outside the timed region
    run_backend("numba", WORKLOADS[0][1], 64)

    print(f"{args.trials} trials per workload; times include decoding and resolution")
    print(f"{'workload':<20} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}  identical")
    for label, cfg in WORKLOADS:
        t_np, b_np = run_backend("numpy", cfg, args.trials)
        t_nb, b_nb = run_backend("numba", cfg, args.trials)
        same = (
            np.array_equal(b_np.true_w, b_nb.true_w)
            and np.array_equal(b_np.jt_decoded, b_nb.jt_decoded)
            and np.array_equal(b_np.weak_decoded, b_nb.weak_decoded)
        )
        print(f"{label:<20} {t_np:>10.3f} {t_nb:>10.3f} {t_np / t_nb:>8.2f}  {same}")
        if not same:
            print("backend outputs diverged; this is a bug")
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
