"""Time the eigenvalue kernels: compiled, pure Python and LAPACK (numpy).

    python benchmarks/bench_eig.py --sizes 2 4 8 16 --repeat 200
"""
import argparse
import timeit

import numpy as np

from perispec import _backend


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 8, 16])
    ap.add_argument("--repeat", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    kernels = {name: _backend.kernel(name) for name in _backend.available()}
    kernels["lapack"] = np.linalg.eigvals
    print(f"{'n':>4} " + " ".join(f"{name:>12}" for name in kernels) + "   (microseconds per call)")
    for n in args.sizes:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        row = []
        for fn in kernels.values():
            reps = max(1, args.repeat // (10 if fn is kernels.get("python") and n > 8 else 1))
            t = min(timeit.repeat(lambda: fn(a), number=reps, repeat=3)) / reps
            row.append(f"{t * 1e6:12.1f}")
        print(f"{n:>4} " + " ".join(row))


if __name__ == "__main__":
    main()
