"""Time the hot kernels on every available backend, and the two exact
Poisson-binomial paths against each other.

    python benchmarks/bench_kernels.py [--quick]

The CF-vs-DP table is what ``sums.CF_THRESHOLD`` is chosen from.
"""

import argparse
import time

import numpy as np

from triarray import kernels
from triarray.schedules import explicit_row
from triarray.sums import poisson_binomial, poisson_binomial_cf


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_backends(sizes, reps, repeat):
    backs = kernels.available_backends()
    names = sorted(backs)
    print(f"backends: {', '.join(names)} (active: {kernels.BACKEND})")
    print("\npb_dp seconds")
    print("kn".rjust(8) + "".join(n.rjust(12) for n in names))
    for kn in sizes:
        p = np.random.default_rng(kn).uniform(0, 0.01, kn)
        row = [best_of(lambda b=backs[n]: b.pb_dp(p), repeat) for n in names]
        print(f"{kn:8d}" + "".join(f"{t:12.4g}" for t in row))

    print(f"\nsimulate_sums seconds ({reps} reps x 100 cells)")
    print("kind".rjust(10) + "".join(n.rjust(12) for n in names))
    for geometric in (False, True):
        p = np.full(100, 0.99 if geometric else 0.01)
        row = [best_of(lambda b=backs[n]: b.simulate_sums(p, geometric, 1, 1, reps), repeat)
               for n in names]
        label = "geometric" if geometric else "bernoulli"
        print(f"{label:>10}" + "".join(f"{t:12.4g}" for t in row))


def bench_paths(sizes, repeat):
    print("\nexact Poisson-binomial seconds (iid row, p = 1/kn)")
    print("kn".rjust(8) + "dp".rjust(12) + "cf-fft".rjust(12) + "max|diff|".rjust(12))
    for kn in sizes:
        row = explicit_row("bernoulli", [1.0 / kn] * kn)
        t_dp = best_of(lambda: poisson_binomial(row), repeat)
        t_cf = best_of(lambda: poisson_binomial_cf(row), repeat)
        a, b = poisson_binomial(row).pmf, poisson_binomial_cf(row).pmf
        hi = max(a.last, b.last)
        diff = float(np.max(np.abs(a.dense(0, hi) - b.dense(0, hi))))
        print(f"{kn:8d}{t_dp:12.4g}{t_cf:12.4g}{diff:12.3g}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--quick", action="store_true", help="small sizes, one repeat")
    args = ap.parse_args()
    if args.quick:
        bench_backends([100, 1000], 10 ** 5, 1)
        bench_paths([1024, 4096, 8192], 1)
    else:
        bench_backends([100, 1000, 10000], 10 ** 6, 3)
        bench_paths([256, 1024, 4096, 8192, 16384, 65536], 3)


if __name__ == "__main__":
    main()
