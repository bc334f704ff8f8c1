"""Time the compiled kernels against their pure-numpy fallbacks.

Run with ``python3 benchmarks/bench_kernels.py``.  Set ``EGOLINK_JIT=0`` to
confirm the numpy path alone; with the default setting both implementations
are timed side by side on synthetic adjacency slices shaped like the hot
loops in scoring and the empirical stage.
"""

import time

import numpy as np

from egolink._kernels import IMPLEMENTATION_PAIRS, JIT_ENABLED


def _fake_csr(rng, n_nodes, avg_degree):
    degrees = rng.poisson(avg_degree, n_nodes).astype(np.int64)
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(degrees, out=indptr[1:])
    indices = np.empty(int(indptr[-1]), dtype=np.int64)
    for u in range(n_nodes):
        row = rng.choice(n_nodes, size=degrees[u], replace=False)
        indices[indptr[u]:indptr[u + 1]] = np.sort(row)
    return indptr, indices


def _bench(fn, args, repeats=5):
    fn(*args)  # warm-up (includes JIT compilation when enabled)
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    rng = np.random.default_rng(7)
    n_nodes, avg_degree = 20_000, 60
    indptr, indices = _fake_csr(rng, n_nodes, avg_degree)
    base = np.sort(rng.choice(n_nodes, size=200, replace=False)).astype(np.int64)
    other = np.sort(rng.choice(n_nodes, size=180, replace=False)).astype(np.int64)
    targets = np.sort(rng.choice(n_nodes, size=2_000, replace=False)).astype(np.int64)
    terms = rng.random((base.size, 3))

    cases = {
        "intersect_size": (base, other),
        "intersect_values": (base, other),
        "row_intersect_sizes": (indptr, indices, base, targets),
        "accumulate_common_terms": (base, terms, indptr, indices, targets),
    }

    print(f"jit available: {JIT_ENABLED}")
    print(f"{'kernel':<28}{'numpy (ms)':>12}{'jit (ms)':>12}{'speedup':>10}")
    for name, args in cases.items():
        plain, jitted = IMPLEMENTATION_PAIRS[name]
        t_plain = _bench(plain, args) * 1e3
        if jitted is None:
            print(f"{name:<28}{t_plain:>12.3f}{'-':>12}{'-':>10}")
            continue
        t_jit = _bench(jitted, args) * 1e3
        ratio = t_plain / t_jit if t_jit > 0 else float("inf")
        print(f"{name:<28}{t_plain:>12.3f}{t_jit:>12.3f}{ratio:>9.1f}x")


if __name__ == "__main__":
    main()
