"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from sgplab import _fallback

try:
    from sgplab import _kernels
except ImportError:  # extension not built
    _kernels = None


def cases(N=10**6, q=1009):
    rng = np.random.default_rng(0)
    mu = _fallback.mobius_sieve(N)
    x = rng.normal(size=N)
    return {
        "mobius_sieve(1e6)": lambda m: m.mobius_sieve(N),
        "dirichlet_convolve(mu, mu; 1e6)": lambda m: m.dirichlet_convolve(mu, mu),
        f"residue_harmonic_sums(q={q}, 1e7)": lambda m: m.residue_harmonic_sums(q, 10**7),
        "compensated_sum(1e6)": lambda m: m.compensated_sum(x),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'kernel':40s} {'cython [s]':>12s} {'python [s]':>12s} {'speedup':>9s}")
    for name, fn in cases().items():
        py = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:40s} {'n/a':>12s} {py:12.4f} {'n/a':>9s}")
            continue
        cy = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        print(f"{name:40s} {cy:12.4f} {py:12.4f} {py / cy:8.1f}x")


if __name__ == "__main__":
    main()
