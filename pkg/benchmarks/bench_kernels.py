"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best wall time per call for each backend, the speedup, and the
largest relative difference between the two results.
"""

import argparse
import math
import timeit

import numpy as np

from explicit_minimizers import _kernels_py
from explicit_minimizers.numerics import _legendre_base
from explicit_minimizers.oracle import initial_points

try:
    from explicit_minimizers import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cases():
    x, w = _legendre_base(16)
    s = np.linspace(1e-3, 2.0, 2000)
    yield "angular_kernel d=2 p=-1", "angular_kernel", (2, -1.0, False, 0.7, s, x, w, 2.0)
    yield "angular_kernel d=4 log", "angular_kernel", (4, 0.0, True, 0.7, s, x, w, 4.0 * math.pi)
    yield "angular_kernel d=5 p=3", "angular_kernel", (5, 3.0, False, 0.7, s, x, w, 2.0 * math.pi**2)
    pts2 = initial_points(800, 2, 0)
    yield "pair_energy_grad N=800 d=2 (3,-1)", "pair_energy_grad", (pts2, 3.0, -1.0)
    pts1 = initial_points(1000, 1, 0)
    yield "pair_energy_grad N=1000 d=1 (3,1)", "pair_energy_grad", (pts1, 3.0, 1.0)
    yield "pair_energy N=800 d=2 (2.5,0)", "pair_energy", (pts2, 2.5, 0.0)


def _first(v):
    return np.atleast_1d(v[0] if isinstance(v, tuple) else v)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not available; only the numpy backend can run")
    print(f"{'case':40s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, fn, argv in cases():
        py = getattr(_kernels_py, fn)
        t_py = min(timeit.repeat(lambda: py(*argv), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{name:40s} {1e3 * t_py:11.2f}")
            continue
        cy = getattr(_ckernels, fn)
        t_cy = min(timeit.repeat(lambda: cy(*argv), number=1, repeat=args.repeat))
        a, b = _first(py(*argv)), _first(cy(*argv))
        diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
        print(f"{name:40s} {1e3 * t_py:11.2f} {1e3 * t_cy:12.2f} {t_py / t_cy:8.1f} {diff:13.2e}")


if __name__ == "__main__":
    main()
