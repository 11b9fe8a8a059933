"""Benchmark: compiled kernel core vs the pure-Python fallback.

Times the scalar special-function kernels on representative workloads
(the mixed-df grids the combiners produce, plus a pooled-p-value
composite) and prints per-call costs and speedups.

Run:  python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import importlib
import time

import numpy as np


def _load_backends():
    backends = {}
    try:
        backends["c"] = importlib.import_module("mipool._kernels")
    except ImportError:
        print("compiled backend unavailable; benchmarking the fallback only")
    backends["python"] = importlib.import_module("mipool._kernels_py")
    return backends


def _beta_workload(mod, points):
    total = 0.0
    for x, a, b in points:
        total += mod.reg_inc_beta_raw(x, a, b)
    return total


def _gamma_workload(mod, points):
    total = 0.0
    for x, a in points:
        total += mod.reg_inc_gamma_lower_raw(x, a)
    return total


def _pooled_p_workload(mod, tests):
    # the composite a pooling run performs: F tail + chi-square tail
    total = 0.0
    for f, rn, rd in tests:
        total += 1.0 - mod.f_cdf_raw(f, rn, rd)
        total += 1.0 - mod.chisq_cdf_raw(f * rn, rn)
    return total


def _time(func, repeat):
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - started)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions (best of); default 5")
    args = parser.parse_args()

    gen = np.random.default_rng(1)
    beta_points = [
        (float(x), float(a), float(b))
        for x in np.linspace(0.02, 0.98, 20)
        for a in np.geomspace(0.5, 500.0, 10)
        for b in np.geomspace(0.5, 500.0, 5)
    ]
    gamma_points = [
        (float(a * f), float(a))
        for a in np.geomspace(0.3, 500.0, 40)
        for f in (0.2, 0.8, 1.0, 1.3, 3.0)
    ]
    pooled_tests = [
        (float(gen.uniform(0.1, 12.0)), float(gen.uniform(0.5, 10.0)),
         float(gen.uniform(5.0, 150.0)))
        for _ in range(2000)
    ]

    backends = _load_backends()
    workloads = [
        ("reg_inc_beta  (%d calls)" % len(beta_points),
         lambda mod: _beta_workload(mod, beta_points), len(beta_points)),
        ("reg_inc_gamma (%d calls)" % len(gamma_points),
         lambda mod: _gamma_workload(mod, gamma_points), len(gamma_points)),
        ("pooled p pair (%d tests)" % len(pooled_tests),
         lambda mod: _pooled_p_workload(mod, pooled_tests), 2 * len(pooled_tests)),
    ]

    print(f"{'workload':34s} " + " ".join(f"{name:>14s}" for name in backends)
          + ("   speedup" if len(backends) == 2 else ""))
    for label, work, calls in workloads:
        times = {}
        for name, mod in backends.items():
            times[name] = _time(lambda m=mod: work(m), args.repeat)
        row = f"{label:34s} "
        row += " ".join(f"{times[name] / calls * 1e6:11.2f} us" for name in backends)
        if len(times) == 2:
            row += f"   {times['python'] / times['c']:7.1f}x"
        print(row)

    # cross-check: backends agree to double rounding
    if len(backends) == 2:
        worst = 0.0
        for x, a, b in beta_points[:400]:
            worst = max(worst, abs(
                backends["c"].reg_inc_beta_raw(x, a, b)
                - backends["python"].reg_inc_beta_raw(x, a, b)))
        print(f"\nmax |c - python| over beta sample: {worst:.2e}")


if __name__ == "__main__":
    main()
