"""Benchmark the compiled ladder kernels against the pure-Python fallback.

Run:  python benchmarks/bench_kernels.py

Kernel-level numbers time ladder_sums on thermal-like distributions of
several sizes; the pipeline-level number times a full criteria sweep in a
fresh interpreter per backend (PHOTONSTAT_PURE_PYTHON toggles selection).
"""

import os
import subprocess
import sys
import time

import numpy as np

from photonstat import _pykernels

try:
    from photonstat import _ckernels
except ImportError:
    _ckernels = None


def thermal_pmf(nbar, size):
    q = nbar / (1.0 + nbar)
    probs = (1 - q) * q ** np.arange(size, dtype=np.float64)
    return probs / probs.sum()


def best_of(fn, repeats=7):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def bench_kernels():
    order = 12
    print(f"ladder_sums, order={order}, best of 7 (ms)")
    print(f"{'size':>6} {'ordering':>10} {'pure':>10} {'compiled':>10} "
          f"{'speedup':>8}")
    for size in (256, 1024, 4096):
        probs = thermal_pmf(2.0, size)
        for rising in (False, True):
            label = "rising" if rising else "falling"
            t_pure = best_of(lambda: _pykernels.ladder_sums(probs, order,
                                                            rising))
            if _ckernels is None:
                print(f"{size:>6} {label:>10} {t_pure * 1e3:>10.3f} "
                      f"{'n/a':>10} {'n/a':>8}")
                continue
            t_comp = best_of(lambda: _ckernels.ladder_sums(probs, order,
                                                           rising))
            print(f"{size:>6} {label:>10} {t_pure * 1e3:>10.3f} "
                  f"{t_comp * 1e3:>10.3f} {t_pure / t_comp:>7.1f}x")


PIPELINE_SNIPPET = """
import time
from photonstat import StateModification, build_thermal, evaluate_all
from photonstat.kernels import USING_COMPILED
from photonstat.states import CutoffPolicy

policy = CutoffPolicy(max_cutoff=4096)
grid = [0.05 * i for i in range(1, 61)]
started = time.perf_counter()
for nbar in grid:
    dist = build_thermal(nbar, policy)
    evaluate_all(dist, StateModification.add(2), ell_max=3)
elapsed = time.perf_counter() - started
backend = "compiled" if USING_COMPILED else "pure"
print(f"{backend}: {len(grid)} sweep points in {elapsed:.3f}s")
"""


def bench_pipeline():
    print("\nfull criteria sweep (thermal, add 2, ell_max=3, 60 points)",
          flush=True)
    for pure in (False, True):
        env = dict(os.environ)
        if pure:
            env["PHOTONSTAT_PURE_PYTHON"] = "1"
        else:
            env.pop("PHOTONSTAT_PURE_PYTHON", None)
        subprocess.run([sys.executable, "-c", PIPELINE_SNIPPET], env=env,
                       check=True)


if __name__ == "__main__":
    if _ckernels is None:
        print("compiled kernels unavailable; pure-Python numbers only\n")
    bench_kernels()
    bench_pipeline()
