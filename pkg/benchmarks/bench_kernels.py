"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so the comparison does not depend on
TRA_PURE_PYTHON. Results of each pair are also checked for agreement.
"""
import argparse
import timeit

import numpy as np

from tra import _kernels_py as py

try:
    from tra import _kernels as cy
except ImportError:  # extension not built
    cy = None


def cases():
    rng = np.random.default_rng(7)
    y = np.ascontiguousarray(rng.uniform(0.0, 20.0, 2000))
    yj = np.ascontiguousarray(rng.uniform(-1.0, 1.0, 2000))
    z = np.ascontiguousarray(rng.uniform(-3.0, 3.0, 2000))
    d = np.ascontiguousarray(rng.normal(size=512))
    c = np.ascontiguousarray(rng.uniform(0.5, 1.5, 512))
    return {
        "tridiag_pivots (N=512)": ("tridiag_pivots", (d, c[:-1])),
        "three_term_run (N=512)": ("three_term_run", (d, c, 0.0, 1.0)),
        "laguerre_table (n<=40, 2000 pts)": ("laguerre_table", (40, 0.5, y)),
        "jacobi_table (n<=40, 2000 pts)": ("jacobi_table", (40, 0.5, -0.3, yj)),
        "mp_table (n<=40, 2000 pts)": ("mp_table", (40, 0.75, z, 1.0, False)),
    }


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a, float), np.asarray(b, float)
    # relative to the magnitude of the whole result: pointwise rtol fails near zeros
    return bool(np.max(np.abs(a - b), initial=0.0) <= 1e-12 * max(np.max(np.abs(a), initial=0.0), 1e-300))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':36s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}  agree")
    for label, (name, argv) in cases().items():
        t_py = min(timeit.repeat(lambda: getattr(py, name)(*argv), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{label:36s} {t_py:12.3f} {'n/a':>12s}")
            continue
        t_cy = min(timeit.repeat(lambda: getattr(cy, name)(*argv), number=1, repeat=args.repeat)) * 1e3
        agree = _same(getattr(py, name)(*argv), getattr(cy, name)(*argv))
        print(f"{label:36s} {t_py:12.3f} {t_cy:12.3f} {t_py / t_cy:8.1f}  {agree}")


if __name__ == "__main__":
    main()
