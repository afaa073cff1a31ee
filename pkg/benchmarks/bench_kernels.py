"""Time the compiled Tabu kernel against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 16,27,36,50] [--iters 200] [--repeat 3]

Both kernels run the same search from the same start, so the reported
costs must agree; the script exits non-zero if they do not.
"""

import argparse
import sys
import time

import numpy as np

from permuc import _tabu_py
from permuc.benchgen import gen_heisenberg_lattice
from permuc.ir import unify_terms
from permuc.placement import flow_matrix
from permuc.topology import preset

try:
    from permuc import _tabu
except ImportError:
    _tabu = None


def instance(n: int, seed: int):
    h = gen_heisenberg_lattice(2, n, seed)
    blocks, _ = unify_terms(h)
    topo = preset("grid", n)
    m = topo.m
    flow = np.zeros((m, m), dtype=np.int64)
    flow[:n, :n] = flow_matrix(blocks, n)
    dist = np.asarray(topo.dist, dtype=np.int64)
    perm0 = np.random.default_rng(seed).permutation(m).astype(np.int64)
    return flow, dist, perm0, n


def best_time(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="16,27,36,50")
    ap.add_argument("--iters", type=int, default=200)
    ap.add_argument("--tenure", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _tabu is None:
        print("compiled extension not built; only the numpy kernel is available", file=sys.stderr)
    print(f"{'n':>4} {'python_ms':>10} {'cython_ms':>10} {'speedup':>8} {'cost':>6}")
    mismatch = False
    for n in (int(x) for x in args.sizes.split(",")):
        flow, dist, perm0, nr = instance(n, 0)
        tp, (_, cp, _) = best_time(lambda: _tabu_py.tabu_search(flow, dist, perm0, nr, args.iters, args.tenure), args.repeat)
        if _tabu is not None:
            tc, (_, cc, _) = best_time(lambda: _tabu.tabu_search(flow, dist, perm0, nr, args.iters, args.tenure), args.repeat)
            mismatch |= cc != cp
            print(f"{n:>4} {tp * 1e3:>10.2f} {tc * 1e3:>10.2f} {tp / tc:>7.1f}x {cp:>6}")
        else:
            print(f"{n:>4} {tp * 1e3:>10.2f} {'-':>10} {'-':>8} {cp:>6}")
    if mismatch:
        print("kernels disagree on the final cost", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
