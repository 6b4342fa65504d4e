"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from dirops.kernels import backends
from dirops.matrix import build_affine_matrix
from dirops.symbols import AffineSymbol


def cases():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(100_000)
    A = rng.standard_normal((96, 96)) + 1j * rng.standard_normal((96, 96))
    v = rng.standard_normal(96) + 1j * rng.standard_normal(96)
    op = np.ascontiguousarray(build_affine_matrix(AffineSymbol(1, 0.25), 96, 96).entries)
    return [
        ("fsum n=1e5", lambda k: k.fsum(x)),
        ("cmatvec 96x96", lambda k: k.cmatvec(A, v)),
        ("jacobi random 96x96", lambda k: k.jacobi_singular_values(A)),
        ("jacobi operator 96x96", lambda k: k.jacobi_singular_values(op)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = backends()
    names = sorted(impls)
    print(f"{'kernel':<24}" + "".join(f"{n:>12}" for n in names) + ("   speedup" if len(names) > 1 else ""))
    for label, fn in cases():
        best = {}
        for n in names:
            t = timeit.Timer(lambda: fn(impls[n]))
            number, _ = t.autorange()
            best[n] = min(t.repeat(args.repeat, number)) / number
        row = f"{label:<24}" + "".join(f"{best[n] * 1e3:>10.3f}ms" for n in names)
        if len(names) > 1:
            row += f"{best['python'] / best['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
