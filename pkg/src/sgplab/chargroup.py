"""Multiplicative group mod an odd prime and its Dirichlet characters.

Characters are indexed by ``t`` in ``0..q-2`` against a fixed primitive root
``g``: ``chi_t(g^j) = exp(2 pi i t j / (q-1))``. One shared discrete-log table
serves every character.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arith import is_prime, prime_divisors
from .errors import CharacterIndexError, ModulusError, PrincipalCharacterError


@dataclass(frozen=True, eq=False)
class CharacterGroup:
    q: int
    g: int
    dlog: np.ndarray    # dlog[a] for a in 1..q-1; dlog[0] = -1
    powers: np.ndarray  # powers[j] = g^j mod q, j in 0..q-2
    roots: np.ndarray   # roots[m] = exp(2 pi i m / (q-1))

    @property
    def order(self) -> int:
        return self.q - 1

    def parity(self, t: int) -> int:
        return 1 if t % 2 == 0 else -1

    def conductor(self, t: int) -> int:
        return 1 if t == 0 else self.q

    def character_values(self, t: int) -> np.ndarray:
        """chi_t(a) for a in 0..q-1 as a complex vector."""
        _check_index(self, t)
        out = np.zeros(self.q, dtype=np.complex128)
        a = np.arange(1, self.q)
        out[1:] = self.roots[(t * self.dlog[a]) % self.order]
        return out

    def character_table(self) -> np.ndarray:
        """(q-1) x q matrix with row t holding chi_t(0..q-1). O(q^2) memory."""
        m = self.order
        t = np.arange(m)[:, None]
        tab = np.zeros((m, self.q), dtype=np.complex128)
        tab[:, 1:] = self.roots[(t * self.dlog[None, 1:]) % m]
        return tab


def smallest_primitive_root(q: int) -> int:
    factors = prime_divisors(q - 1)
    for g in range(2, q):
        if all(pow(g, (q - 1) // d, q) != 1 for d in factors):
            return g
    return 1  # q = 2 only


def build_group(q: int) -> CharacterGroup:
    """Character group for an odd prime modulus ``q``."""
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise ModulusError(f"modulus must be an odd prime, got {q}")
    g = smallest_primitive_root(q)
    m = q - 1
    powers = np.empty(m, dtype=np.int64)
    x = 1
    for j in range(m):
        powers[j] = x
        x = x * g % q
    dlog = np.full(q, -1, dtype=np.int64)
    dlog[powers] = np.arange(m, dtype=np.int64)
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    for arr in (dlog, powers, roots):
        arr.setflags(write=False)
    return CharacterGroup(q=q, g=g, dlog=dlog, powers=powers, roots=roots)


def _check_index(grp: CharacterGroup, t: int) -> None:
    if not 0 <= t <= grp.q - 2:
        raise CharacterIndexError(f"character index {t} outside 0..{grp.q - 2}")


def _check_nonprincipal(grp: CharacterGroup, t: int) -> None:
    _check_index(grp, t)
    if t == 0:
        raise PrincipalCharacterError("operation needs a nonprincipal character")


def char_eval(grp: CharacterGroup, t: int, n: int) -> complex:
    _check_index(grp, t)
    a = n % grp.q
    if a == 0:
        return 0j
    return complex(grp.roots[(t * int(grp.dlog[a])) % grp.order])


def gauss_sum(grp: CharacterGroup, t: int) -> complex:
    """tau(chi_t) = sum_a chi_t(a) e^{2 pi i a/q}; |tau|^2 = q for t != 0."""
    _check_nonprincipal(grp, t)
    chi = grp.character_values(t)
    a = np.arange(grp.q)
    return complex(np.sum(chi * np.exp(2j * np.pi * a / grp.q)))


def gauss_sums_all(grp: CharacterGroup) -> np.ndarray:
    """tau(chi_t) for every t at once via one length-(q-1) inverse DFT."""
    m = grp.order
    return np.fft.ifft(np.exp(2j * np.pi * grp.powers / grp.q)) * m


def orthogonality_sum(grp: CharacterGroup, parity: int, n1: int, n2: int) -> complex:
    """sum over chi with chi(-1) = parity of chi(n1) conj(chi(n2)), by enumeration."""
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")
    q = grp.q
    if n1 % q == 0 or n2 % q == 0:
        return 0j
    m = grp.order
    d1, d2 = int(grp.dlog[n1 % q]), int(grp.dlog[n2 % q])
    ts = np.arange(0 if parity == 1 else 1, m, 2)
    return complex(np.sum(grp.roots[(ts * (d1 - d2)) % m]))


def orthogonality_closed(q: int, parity: int, n1: int, n2: int) -> float:
    """Closed form of the parity-restricted orthogonality relation for prime q."""
    if n1 % q == 0 or n2 % q == 0:
        return 0.0
    half = (q - 1) / 2
    val = 0.0
    if (n1 - n2) % q == 0:
        val += half
    if (n1 + n2) % q == 0:
        val += parity * half
    return val
