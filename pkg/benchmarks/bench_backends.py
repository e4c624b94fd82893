#!/usr/bin/env python3
"""Compare the compiled and interpreted kernel backends.

Times Hopcroft-Karp matching, Tarjan SCC, and BFS reachability on random
instances at a few sizes.  The first compiled call includes JIT
compilation (or cache load); it is reported separately from the warm
timings.

    python3 benchmarks/bench_backends.py [--sizes 500,2000,8000] [--repeats 3]
"""

import argparse
import time

import numpy as np

from structres import set_backend
from structres._kernels import kernels


def random_csr(rng, n_left, n_right, avg_degree):
    degrees = rng.poisson(avg_degree, n_left)
    indptr = np.zeros(n_left + 1, np.int64)
    np.cumsum(degrees, out=indptr[1:])
    indices = rng.integers(0, n_right, int(indptr[-1]), dtype=np.int64)
    for u in range(n_left):
        chunk = np.unique(indices[indptr[u] : indptr[u + 1]])
        indices[indptr[u] : indptr[u] + len(chunk)] = chunk
        indices[indptr[u] + len(chunk) : indptr[u + 1]] = chunk[-1] if len(chunk) else 0
    return indptr, indices


def bench_once(n, rng):
    indptr, indices = random_csr(rng, n, n, 6)
    seeds = np.zeros(n, dtype=bool)
    seeds[: max(1, n // 100)] = True
    k = kernels()

    out = {}
    t0 = time.perf_counter()
    match_l = np.full(n, -1, np.int64)
    match_r = np.full(n, -1, np.int64)
    size = k.hopcroft_karp(indptr, indices, match_l, match_r)
    out["matching"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    comp = k.tarjan_scc(indptr, indices, n)
    out["scc"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    visited = k.bfs_reachable(indptr, indices, seeds)
    out["reachability"] = time.perf_counter() - t0

    out["_check"] = (int(size), int(comp.max()), int(visited.sum()))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="500,2000,8000")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    try:
        set_backend("numba")
        backends = ["numba", "python"]
    except (ImportError, ValueError):
        print("numba unavailable; timing the python backend only")
        backends = ["python"]

    # compilation / cache-load cost, measured once on a tiny instance
    if "numba" in backends:
        set_backend("numba")
        rng = np.random.default_rng(args.seed)
        t0 = time.perf_counter()
        bench_once(16, rng)
        print(f"numba first call (compile or cache load): {time.perf_counter() - t0:.2f}s\n")

    header = f"{'kernel':<14}{'n':>8}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        rows = {}
        checks = {}
        for backend in backends:
            set_backend(backend)
            rng = np.random.default_rng(args.seed)
            best = {}
            for _ in range(args.repeats):
                result = bench_once(n, rng)
                checks.setdefault(backend, result.pop("_check"))
                for name, dt in result.items():
                    best[name] = min(best.get(name, float("inf")), dt)
            rows[backend] = best
        assert len(set(checks.values())) == 1, f"backend results differ: {checks}"
        for name in ("matching", "scc", "reachability"):
            line = f"{name:<14}{n:>8}"
            for backend in backends:
                line += f"{rows[backend][name] * 1e3:>12.2f}ms"
            if len(backends) == 2:
                ratio = rows["python"][name] / max(rows["numba"][name], 1e-9)
                line += f"{ratio:>9.1f}x"
            print(line)
    set_backend(None)


if __name__ == "__main__":
    main()
