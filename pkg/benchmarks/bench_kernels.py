"""Time the entropy kernels of each available backend on Dirichlet tables.

    python3 benchmarks/bench_kernels.py --count 20000 --repeat 5
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from infodiv._kernels import AVAILABLE, get_backend

CASES = (
    ("entropy_flat", (64,), "flat"),
    ("batch_pair_entropies", (3, 3), "batch"),
    ("batch_triple_entropies", (2, 2, 2), "batch"),
    ("batch_triple_entropies", (3, 3, 3), "batch"),
)


def _inputs(shape, kind, count, rng):
    n = int(np.prod(shape))
    if kind == "flat":
        return rng.dirichlet(np.ones(n))
    return np.ascontiguousarray(rng.dirichlet(np.ones(n), size=count).reshape((count,) + shape))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=10_000, help="tables per batch call")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    print(f"backends: {', '.join(AVAILABLE)}")
    print(f"{'kernel':<24}{'shape':<12}" + "".join(f"{b:>14}" for b in AVAILABLE) + f"{'speedup':>10}")
    for fn, shape, kind in CASES:
        x = _inputs(shape, kind, args.count, rng)
        number = 2000 if kind == "flat" else 1
        best = {}
        results = {}
        for b in AVAILABLE:
            f = getattr(get_backend(b), fn)
            results[b] = np.asarray(f(x))
            best[b] = min(timeit.repeat(lambda: f(x), number=number, repeat=args.repeat)) / number
        if len(results) > 1:
            # both routes must agree before their timings mean anything
            np.testing.assert_allclose(results["cython"], results["python"], rtol=0, atol=1e-12)
        speed = f"{best['python'] / best['cython']:>9.1f}x" if "cython" in best else f"{'-':>10}"
        cells = "".join(f"{best[b] * 1e3:>11.3f} ms" for b in AVAILABLE)
        print(f"{fn:<24}{'x'.join(map(str, shape)):<12}{cells}{speed}")


if __name__ == "__main__":
    main()
