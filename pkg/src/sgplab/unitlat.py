"""Log-cyclotomic-unit lattice for a prime q, its dual basis, Babai round-off.

Coordinates are indexed by G = Z_q^* / {+-1} with representatives 1..n,
n = (q-1)/2. With z_i = log(2 sin(pi i / q)) the basis vectors are

    (b_j)_i = z_{fold(i j)} - z_i,     j = 2..n,

where fold(m) maps a residue to its representative in 1..n.

Every b_j is a G-translate of z minus z itself, so any combination
sum_j c_j b_j is a correlation over the cyclic group G. Reindexing by the
discrete log of a primitive root turns that into an ordinary cyclic
correlation of length n, which is what the FFT paths below exploit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .arith import is_prime
from .chargroup import build_group
from .errors import ModulusError, NumericalRankError, ShapeError
from .lfun import LTable

ZETA2_OVER_ZETA4 = 15.0 / math.pi**2


def fold(m, q: int):
    """Representative of +-m in 1..(q-1)/2 (works elementwise on arrays)."""
    r = np.mod(m, q)
    return np.minimum(r, q - r)


@dataclass(frozen=True, eq=False)
class LogUnitBasis:
    """Basis stored through ``z`` only; rows are built on demand."""
    q: int
    n: int
    z: np.ndarray       # z[i - 1] = log(2 sin(pi i/q)), i = 1..n
    order: np.ndarray   # order[alpha] = fold(g^alpha), alpha = 0..n-1
    index: np.ndarray   # index[i] = alpha with fold(g^alpha) = i; index[0] = -1

    @property
    def rank(self) -> int:
        return self.n - 1

    @property
    def labels(self) -> np.ndarray:
        """The j of each basis vector, in storage order."""
        return np.arange(2, self.n + 1)

    def row(self, j: int) -> np.ndarray:
        i = np.arange(1, self.n + 1)
        return self.z[fold(i * j, self.q) - 1] - self.z

    def rows(self) -> np.ndarray:
        """(n-1) x n matrix with rows b_2..b_n. O(n^2) memory."""
        i = np.arange(1, self.n + 1)
        j = self.labels[:, None]
        return self.z[fold(i[None, :] * j, self.q) - 1] - self.z[None, :]

    @property
    def _z_hat(self) -> np.ndarray:
        zh = getattr(self, "_zh", None)
        if zh is None:
            zh = np.fft.fft(self.z[self.order - 1])
            object.__setattr__(self, "_zh", zh)
        return zh

    def combine(self, coeffs) -> np.ndarray:
        """sum_j coeffs[j-2] b_j in O(n log n)."""
        coeffs = np.asarray(coeffs, dtype=np.float64)
        if coeffs.shape != (self.rank,):
            raise ShapeError(f"expected {self.rank} coefficients, got {coeffs.shape}")
        # v(i) = sum_{j in G} c_j z(i j) with c_1 = -sum_{j>=2} c_j
        c = np.empty(self.n)
        c[self.index[self.labels]] = coeffs
        c[0] = -coeffs.sum()
        # cyclic correlation V[alpha] = sum_beta c[beta] Z[alpha + beta]
        V = np.fft.ifft(np.conj(np.fft.fft(c)) * self._z_hat).real
        out = np.empty(self.n)
        out[self.order - 1] = V
        return out

    def to_dict(self) -> dict:
        return {"q": self.q, "n": self.n}


@dataclass(frozen=True, eq=False)
class DualBasis:
    vectors: np.ndarray  # row j-2 holds b_j^dual
    nu: float            # shared squared norm

    @property
    def norms_sq(self) -> np.ndarray:
        return np.einsum("ij,ij->i", self.vectors, self.vectors)

    def overlaps(self, target) -> np.ndarray:
        target = np.asarray(target, dtype=np.float64)
        if target.shape != (self.vectors.shape[1],):
            raise ShapeError(f"target must have length {self.vectors.shape[1]}, got {target.shape}")
        return self.vectors @ target


class FastDual:
    """Dual-basis overlaps by the group-circulant FFT route (no n x n matrix)."""

    def __init__(self, basis: LogUnitBasis):
        self.basis = basis

    def overlaps(self, target) -> np.ndarray:
        return dual_apply_fast(self.basis, target)


def build_basis(q: int) -> LogUnitBasis:
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise ModulusError(f"modulus must be an odd prime, got {q}")
    grp = build_group(q)
    n = (q - 1) // 2
    i = np.arange(1, n + 1)
    z = np.log(2.0 * np.sin(np.pi * i / q))
    order = fold(grp.powers[:n], q).astype(np.int64)
    index = np.full(n + 1, -1, dtype=np.int64)
    index[order] = np.arange(n)
    for arr in (z, order, index):
        arr.setflags(write=False)
    return LogUnitBasis(q=q, n=n, z=z, order=order, index=index)


def dual_direct(basis: LogUnitBasis) -> DualBasis:
    """Rows of (B B^T)^{-1} B, B holding the basis vectors as rows. O(n^3)."""
    if basis.rank < 1:
        raise ValueError(f"q={basis.q} gives an empty basis")
    B = basis.rows()
    gram = B @ B.T
    try:
        factor = cho_factor(gram)
    except np.linalg.LinAlgError as exc:
        raise NumericalRankError(f"Gram matrix for q={basis.q} is not positive definite") from exc
    D = cho_solve(factor, B)
    norms = np.einsum("ij,ij->i", D, D)
    return DualBasis(D, float(np.mean(norms)))


def dual_norm_via_L(ltab: LTable) -> float:
    """(4/|G|) sum over even nonprincipal chi of 1/(q |L(1, chi)|^2)."""
    q = ltab.q
    if q < 5:
        raise ModulusError(f"needs q >= 5, got {q}")
    G = (q - 1) // 2
    even = np.abs(ltab.values[ltab.even_mask])
    return 4.0 / G * math.fsum(1.0 / (q * even**2))


def asymptotic_ratio(q: int, nu: float) -> float:
    """q nu / (4 zeta(2)/zeta(4)); tends to 1 under GRH."""
    return q * nu / (4.0 * ZETA2_OVER_ZETA4)


def round_half_up(x) -> np.ndarray:
    return np.floor(np.asarray(x) + 0.5).astype(np.int64)


def babai_decode(dual, target) -> np.ndarray:
    """Round-off decoding: round each dual-basis overlap of ``target``.

    ``dual`` is a :class:`DualBasis` or :class:`FastDual`. Rounding is
    floor(x + 1/2), so an error overlap in [-1/2, 1/2) decodes correctly.
    """
    return round_half_up(dual.overlaps(target))


def dual_apply_fast(basis: LogUnitBasis, target) -> np.ndarray:
    """<b_j^dual, target> for all j in O(n log n).

    Projects the target onto the all-ones complement, then deconvolves the
    group correlation by z: the coefficients c of P t = sum_j c_j b_j are the
    overlaps because the duals are biorthogonal and lie in that complement.
    """
    target = np.asarray(target, dtype=np.float64)
    if target.shape != (basis.n,):
        raise ShapeError(f"target must have length {basis.n}, got {target.shape}")
    if basis.rank < 1:
        return np.zeros(0)
    v = target - target.mean()
    V_hat = np.fft.fft(v[basis.order - 1])
    D = np.zeros(basis.n, dtype=np.complex128)
    D[1:] = V_hat[1:] / basis._z_hat[1:]
    c = np.fft.fft(D).real / basis.n
    return c[basis.index[basis.labels]]
