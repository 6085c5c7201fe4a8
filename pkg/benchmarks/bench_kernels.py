"""Kernel backend micro-benchmarks: pure Python vs compiled extension.

Times the three hot paths (echelon insertion over F_ell, code-matrix
multiplication over the field tower, and the upper-triangularity scan used
by cell decomposition) on identical inputs for both backends and prints a
comparison table.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeats 5 --dim 96
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from bruhatlab import _kernels_py
from bruhatlab.chevalley import Chevalley
from bruhatlab.fieldtower import build_tower
from bruhatlab.rootdata import build_A

try:
    from bruhatlab import _kernels
except ImportError:
    _kernels = None


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_echelon(kern, dim: int, n_vecs: int, ell: int, seed: int):
    rng = np.random.default_rng(seed)
    vecs = rng.integers(0, ell, size=(n_vecs, dim), dtype=np.int64)

    def run():
        rows = np.zeros((dim, dim), dtype=np.int64)
        have = np.zeros(dim, dtype=np.uint8)
        inserted = 0
        for v in vecs:
            if kern.echelon_insert(rows, have, v.copy(), ell) >= 0:
                inserted += 1
        return inserted

    return run


def bench_matmul(kern, mats, m: int, zech, Q1: int):
    def run():
        acc = mats[0]
        for M in mats[1:]:
            acc = kern.mat_mul_codes(acc, M, m, zech, Q1)
        return acc

    return run


def bench_scan(kern, P, G, Q, m: int, zech, Q1: int):
    def run():
        idx, hits = 0, 0
        while True:
            idx = kern.scan_conj_upper(P, G, Q, m, zech, Q1, idx)
            if idx < 0:
                return hits
            hits += 1
            idx += 1

    return run


def group_sample(cx: Chevalley, count: int, seed: int):
    """Random words in the generators, as a stacked code-matrix array."""
    rng = random.Random(seed)
    tw, m = cx.tower, cx.m
    nonzero = list(range(tw.Q1))
    out = np.empty((count, m * m), dtype=np.int64)
    for row in range(count):
        g = cx.eps_simple(1, nonzero[0])  # start off the identity
        for _ in range(6):
            i = rng.randrange(1, cx.rs.rank + 1)
            pick = rng.randrange(3)
            if pick == 0:
                g = cx.mat_mul(g, cx.eps_simple(i, rng.choice(nonzero)))
            elif pick == 1:
                g = cx.mat_mul(g, cx.sdot(i))
            else:
                g = cx.mat_mul(g, cx.coroot(i, rng.choice(nonzero)))
        out[row] = g
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3, help="timing repeats, best-of")
    ap.add_argument("--dim", type=int, default=64, help="echelon ambient dimension")
    ap.add_argument("--vecs", type=int, default=400, help="echelon insertions")
    ap.add_argument("--ell", type=int, default=17, help="coefficient prime")
    ap.add_argument("--chain", type=int, default=300, help="matrices per product chain")
    ap.add_argument("--scan", type=int, default=400, help="group elements to scan")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    backends = [("py", _kernels_py)]
    if _kernels is not None:
        backends.append(("cy", _kernels))
    else:
        print("compiled extension not built; timing pure Python only\n")

    # rank-2 group over the level-2 tower: 3x3 code matrices, Q1 = 3
    cx = Chevalley(build_tower(2, 1, 2), build_A(2))
    tw, m = cx.tower, cx.m
    G = group_sample(cx, args.scan, args.seed)
    chain = group_sample(cx, args.chain, args.seed + 1)
    chain_mats = [chain[i] for i in range(chain.shape[0])]
    w0dot = cx.wdot(cx.rs.w0)
    P = np.array(w0dot, dtype=np.int64)
    Q = np.array(cx.mat_inv(w0dot), dtype=np.int64)

    workloads = []
    for name, kern in backends:
        results = {}
        results["echelon"] = _time(
            bench_echelon(kern, args.dim, args.vecs, args.ell, args.seed), args.repeats
        )
        results["matmul"] = _time(
            bench_matmul(kern, chain_mats, m, tw.zech, tw.Q1), args.repeats
        )
        results["scan"] = _time(
            bench_scan(kern, P, G, Q, m, tw.zech, tw.Q1), args.repeats
        )
        workloads.append((name, results))

    names = [w for w, _ in workloads]
    print(f"{'workload':<10}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for key in ("echelon", "matmul", "scan"):
        row = f"{key:<10}"
        for _, res in workloads:
            row += f"{res[key] * 1e3:>10.2f}ms"
        if len(workloads) == 2:
            ratio = workloads[0][1][key] / max(workloads[1][1][key], 1e-12)
            row += f"{ratio:>9.1f}x"
        print(row)

    # sanity: both backends must agree on the scan workload
    if len(backends) == 2:
        a = bench_scan(backends[0][1], P, G, Q, m, tw.zech, tw.Q1)()
        b = bench_scan(backends[1][1], P, G, Q, m, tw.zech, tw.Q1)()
        assert a == b, f"backend disagreement: {a} != {b}"
        print(f"\nagreement check: both backends report {a} upper-triangular hits")


if __name__ == "__main__":
    main()
