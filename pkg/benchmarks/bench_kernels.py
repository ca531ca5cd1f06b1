#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernels on the census sweeps.

    python benchmarks/bench_kernels.py [--max-len 12] [--repeat 3]

Prints one line per kernel with the best wall time for each backend and
checks that both backends return identical results.
"""
from __future__ import annotations

import argparse
import sys
import time

from rhpp import _kernels
from rhpp.hjcf import generate_Td


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_scan(max_len, backend):
    # the V_l sweep: every budget 2l..3l-3 with t in [-1, 1]
    def run():
        hits = []
        for l in range(3, max_len + 1):
            for total in range(2 * l, 3 * l - 2):
                hits.append(_kernels.scan_budget(l, total, -1, 1, backend=backend))
        return hits
    return run


def bench_eps3(max_len, backend):
    strings = [s.entries for s in generate_Td(6, max_len)]

    def run():
        return [_kernels.eps3_chain(s, backend=backend) for s in strings]
    return run


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-len", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    print(f"compiled backend available: {_kernels.BACKEND == 'cython'}")
    if _kernels.BACKEND != "cython":
        print("extension not built; only the pure-Python timings are shown")
    ok = True
    for name, make in (("scan_budget", bench_scan), ("eps3_chain", bench_eps3)):
        t_py, r_py = _best(make(args.max_len, "python"), args.repeat)
        if _kernels.BACKEND == "cython":
            t_c, r_c = _best(make(args.max_len, None), args.repeat)
            same = r_py == r_c
            ok &= same
            print(f"{name:<12} python {t_py:8.4f}s  cython {t_c:8.4f}s  speedup {t_py / t_c:6.1f}x  match={same}")
        else:
            print(f"{name:<12} python {t_py:8.4f}s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
