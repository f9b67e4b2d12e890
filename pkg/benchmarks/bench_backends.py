#!/usr/bin/env python3
"""Time the numba kernels against the numpy fallback.

Numba is warmed up first so compile time is excluded. Each workload runs
``--repeat`` times per backend and the best time is reported; results are
checked for equality between backends.

    python benchmarks/bench_backends.py --repeat 3
    python benchmarks/bench_backends.py --skip-slow   # leave out numpy at d=7
"""

import argparse
import json
import time

from gaussver import gauss, kernels
from gaussver.polymatroid import exchange_check
from gaussver.sets import veronese


def enumerate_d(d):
    def job(backend):
        en = gauss.enumerate_gauss(veronese(3, d), d, backend=backend)
        return en.generators.array.tobytes(), en.nonsingular
    return job


def table_d(d):
    def job(backend):
        gauss._TABLES.clear()
        t = gauss.build_witness_table(d, backend=backend)
        return [(p, e.witness) for p, e in t.entries.items()]
    return job


def exchange_d(d):
    s = gauss.target_set(d)

    def job(backend):
        return exchange_check(s, backend)
    return job


WORKLOADS = [
    ("enumerate d=5", enumerate_d(5), False),
    ("enumerate d=6", enumerate_d(6), False),
    ("enumerate d=7", enumerate_d(7), True),
    ("witness table d=7", table_d(7), False),
    ("witness table d=8", table_d(8), False),
    ("exchange d=7", exchange_d(7), False),
    ("exchange d=8", exchange_d(8), True),
]


def best_of(fn, backend, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-slow", action="store_true", help="skip numpy on the largest workloads")
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args()

    kernels.warmup("numba")
    rows = []
    print(f"{'workload':<20} {'numba':>10} {'numpy':>10} {'speedup':>8}  agree")
    for name, fn, slow in WORKLOADS:
        t_nb, r_nb = best_of(fn, "numba", args.repeat)
        if slow and args.skip_slow:
            t_np, agree = float("nan"), None
        else:
            t_np, r_np = best_of(fn, "numpy", 1 if slow else args.repeat)
            agree = r_nb == r_np
        speed = t_np / t_nb if t_nb > 0 else float("nan")
        print(f"{name:<20} {t_nb:>9.3f}s {t_np:>9.3f}s {speed:>7.1f}x  {agree}")
        rows.append({"workload": name, "numba_s": t_nb, "numpy_s": t_np, "agree": agree})
    gauss._TABLES.clear()
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
