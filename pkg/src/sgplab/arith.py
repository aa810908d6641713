"""Small integer helpers: primality, factorization, prime lists."""
from __future__ import annotations

import math

import numpy as np


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return factorize(n) == {n: 1}


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def euler_phi(n: int) -> int:
    phi = n
    for p in factorize(n):
        phi -= phi // p
    return phi


def primes_up_to(n: int) -> np.ndarray:
    """All primes ``p <= n`` (Eratosthenes on a boolean mask)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    mask[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if mask[p]:
            mask[p * p::2 * p] = False
    return np.flatnonzero(mask).astype(np.int64)


def primes_between(lo: int, hi: int) -> list[int]:
    return [int(p) for p in primes_up_to(hi) if p >= lo]
