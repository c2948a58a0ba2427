"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from delayadvect import _pykernels

try:
    from delayadvect import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    u = np.sort(rng.uniform(0, 140, 2000))
    zs = -2j * np.pi * np.linspace(-6, 6, 4096) * 0.3
    n = 401
    mant = rng.standard_normal(n)
    logscale = np.linspace(0, 50, n)
    t = np.linspace(0, 40, 500)
    tn = np.linspace(0, 2.0, 8001)
    un = np.cos(tn)
    return {
        "dexp_eval real (2000 pts, 140 nodes)": lambda k: k.dexp_eval(-0.35, u),
        "dexp_eval complex (2000 pts)": lambda k: k.dexp_eval(0.2 + 0.3j, u),
        "dexp_eval_multi (4096 lambdas, u=10)": lambda k: k.dexp_eval_multi(zs, 10.0),
        "series_sum (401 terms, 500 t)": lambda k: k.series_sum(mant, logscale, 0.0, 0.1, 0.7, t),
        "l1_caputo (8000 steps)": lambda k: k.l1_caputo(tn, un, 0.5),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled kernels unavailable; build with pip install -e . --no-build-isolation")
    print(f"{'kernel':40s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases().items():
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:40s} {tp:12.3f} {'-':>12s} {'-':>8s}")
            continue
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:40s} {tp:12.3f} {tc:12.3f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
