# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. ``_fallback`` mirrors every function here."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def mobius_sieve(Py_ssize_t N):
    """mu(0..N) by a linear sieve; mu[0] is 0."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] mu = np.zeros(N + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] primes = np.zeros(N // 2 + 2, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] composite = np.zeros(N + 1, dtype=np.uint8)
    cdef Py_ssize_t i, j, p, np_ = 0, m
    if N >= 1:
        mu[1] = 1
    for i in range(2, N + 1):
        if not composite[i]:
            primes[np_] = i
            np_ += 1
            mu[i] = -1
        for j in range(np_):
            p = primes[j]
            m = i * p
            if m > N:
                break
            composite[m] = 1
            if i % p == 0:
                mu[m] = 0
                break
            mu[m] = -mu[i]
    return mu


def dirichlet_convolve(const cnp.int64_t[:] a, const cnp.int64_t[:] b):
    """(a * b)(n) = sum_{de=n} a(d) b(e) for 1 <= n < len(a); index 0 stays 0."""
    cdef Py_ssize_t N = a.shape[0] - 1
    if b.shape[0] != a.shape[0]:
        raise ValueError("length mismatch")
    out_arr = np.zeros(N + 1, dtype=np.int64)
    cdef cnp.int64_t[:] out = out_arr
    cdef Py_ssize_t d, e, n
    cdef cnp.int64_t ad
    for d in range(1, N + 1):
        ad = a[d]
        if ad == 0:
            continue
        n = d
        e = 1
        while n <= N:
            out[n] += ad * b[e]
            e += 1
            n += d
    return out_arr


def residue_harmonic_sums(Py_ssize_t q, Py_ssize_t N):
    """H[a] = sum_{1<=n<=N, n = a mod q} 1/n with Neumaier compensation, a in 0..q-1."""
    out_arr = np.zeros(q, dtype=np.float64)
    cdef double[:] out = out_arr
    cdef Py_ssize_t a, n
    cdef double s, c, x, t
    for a in range(q):
        s = 0.0
        c = 0.0
        n = a if a > 0 else q
        while n <= N:
            x = 1.0 / <double>n
            t = s + x
            if fabs(s) >= fabs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
            n += q
        out[a] = s + c
    return out_arr


def compensated_sum(const double[:] xs):
    """Neumaier-compensated sum of a float64 vector."""
    cdef Py_ssize_t i
    cdef double s = 0.0, c = 0.0, x, t
    for i in range(xs.shape[0]):
        x = xs[i]
        t = s + x
        if fabs(s) >= fabs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c
