"""Compare the numba and numpy eigensolver kernels against LAPACK.

Usage: python benchmarks/bench_kernels.py [--sizes 4,8,16,32,64] [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from clonecap import _kernels


def hermitian(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,8,16,32,64")
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    if not _kernels.HAVE_NUMBA:
        print("numba not importable; timing the numpy kernels only")

    print(f"{'n':>4} {'kernel':>10} {'backend':>8} {'seconds':>11} {'vs LAPACK':>10} {'max |dw|':>9}")
    for n in (int(s) for s in args.sizes.split(",")):
        a = hermitian(n, rng)
        ref = np.linalg.eigvalsh(a)
        t_ref = best_of(lambda: np.linalg.eigvalsh(a), args.repeat)
        for backend in backends:
            # first call compiles the numba kernel
            _kernels.jacobi_eigh(a, True, backend=backend)
            _kernels.tridiag_eigvalsh(a, backend=backend)
            for name, fn in (
                ("jacobi", lambda: _kernels.jacobi_eigh(a, True, backend=backend)[0]),
                ("tridiag", lambda: _kernels.tridiag_eigvalsh(a, backend=backend)),
            ):
                t = best_of(fn, args.repeat)
                err = np.abs(np.sort(fn()) - ref).max()
                print(f"{n:>4} {name:>10} {backend:>8} {t:>11.3e} {t / t_ref:>9.1f}x {err:>9.1e}")


if __name__ == "__main__":
    main()
