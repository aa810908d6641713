"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``."""
import math

import numpy as np


def mobius_sieve(N):
    mu = np.ones(N + 1, dtype=np.int64)
    mu[0] = 0
    if N < 2:
        return mu
    is_comp = np.zeros(N + 1, dtype=bool)
    for p in range(2, N + 1):
        if is_comp[p]:
            continue
        is_comp[2 * p::p] = True
        mu[p::p] *= -1
        if p <= N // p:
            mu[p * p::p * p] = 0
    return mu


def dirichlet_convolve(a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        raise ValueError("length mismatch")
    N = a.shape[0] - 1
    out = np.zeros(N + 1, dtype=np.int64)
    for d in np.flatnonzero(a[1:]) + 1:
        m = N // d
        out[d::d] += a[d] * b[1:m + 1]
    return out


def residue_harmonic_sums(q, N):
    out = np.zeros(q, dtype=np.float64)
    for a in range(q):
        start = a if a > 0 else q
        if start > N:
            continue
        out[a] = math.fsum(1.0 / np.arange(start, N + 1, q, dtype=np.float64))
    return out


def compensated_sum(xs):
    return math.fsum(np.asarray(xs, dtype=np.float64))
