"""Time the numba and numpy kernels on the same functional-graph workloads.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 625,29791,1000000]

Each size q picks a field F_q, the curve y^2 = x^3 + x + 2 and the
multiplication-by-2 map, then times successor table, periodic peeling,
tree annotation and cycle labelling on both backends.  Results are checked
for equality before timing is reported.
"""

import argparse
import time

import numpy as np
from sympy import factorint

from ecdyn import _kernels
from ecdyn.curve import Curve, mul2_endo
from ecdyn.ff import fld_make

STAGES = ("successor_table", "peel_periodic", "annotate_trees", "cycle_ids")


def field_for(size):
    (p, k), = factorint(size).items()
    return fld_make(p, k)


def run(kernels, a_logs, b_logs, zech, n):
    times = {}
    t = time.perf_counter()
    succ = kernels["successor_table"](a_logs, b_logs, zech, n)
    times["successor_table"] = time.perf_counter() - t
    t = time.perf_counter()
    per = kernels["peel_periodic"](succ)
    times["peel_periodic"] = time.perf_counter() - t
    t = time.perf_counter()
    depth, root = kernels["annotate_trees"](succ, per)
    times["annotate_trees"] = time.perf_counter() - t
    t = time.perf_counter()
    cyc = kernels["cycle_ids"](succ, per)
    times["cycle_ids"] = time.perf_counter() - t
    return times, (succ, per, depth, root, cyc)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", default="625,29791,1000003")
    args = ap.parse_args()
    if not _kernels.NUMBA_KERNELS:
        raise SystemExit("numba is not installed")

    print(f"{'q':>9} {'stage':<16} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for size in map(int, args.sizes.split(",")):
        F = field_for(size)
        C = Curve.short(F, F.order, 1, 2)
        alpha = mul2_endo(C, -1)
        a_logs, b_logs = alpha.a.log_coeffs(), alpha.b.log_coeffs()
        zech, n = F.tables.zech, F.order - 1

        run(_kernels.NUMBA_KERNELS, a_logs, b_logs, zech, n)  # compile or load from cache
        best = {}
        outs = {}
        for name, kernels in (("numpy", _kernels.NUMPY_KERNELS), ("numba", _kernels.NUMBA_KERNELS)):
            acc = {s: float("inf") for s in STAGES}
            for _ in range(args.repeat):
                times, outs[name] = run(kernels, a_logs, b_logs, zech, n)
                acc = {s: min(acc[s], times[s]) for s in STAGES}
            best[name] = acc
        for x, y in zip(outs["numpy"], outs["numba"]):
            assert np.array_equal(x, y), "backends disagree"
        for s in STAGES:
            a, b = best["numpy"][s], best["numba"][s]
            print(f"{F.order:>9} {s:<16} {a:>10.4f} {b:>10.4f} {a / b:>8.1f}")


if __name__ == "__main__":
    main()
