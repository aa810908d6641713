"""Negative moments of L(1, chi) and the arithmetic that predicts them.

r_k is the k-fold Dirichlet convolution of the Moebius function, i.e. the
coefficients of 1/L(s, chi)^k. The predicted size of

    sum_{chi != chi0, chi(-1) = +-1} |L(1, chi)|^{-2k}

is (C(k)/2) phi(q) prod_{p | q} E_p(k)^{-1}, with
E_p(k) = 1 + sum_v binom(k, v)^2 / p^{2v} and C(k) = prod_p E_p(k).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import _core
from .arith import euler_phi, prime_divisors, primes_up_to
from .chargroup import build_group
from .errors import ParameterError, ResidueError
from .lfun import LTable, l1_table

PARITY_FILTERS = ("even", "odd", "all")
DEFAULT_PRIME_CUTOFF = 10**6


class EmptyFamilyWarning(UserWarning):
    """The requested character family has no nonprincipal members."""


@dataclass(frozen=True, eq=False)
class RkTable:
    k: int
    N: int
    values: np.ndarray  # values[n] = r_k(n); values[0] = 0

    def __getitem__(self, n: int) -> int:
        return int(self.values[n])


class EulerProduct(NamedTuple):
    value: float
    tail_width: float


@dataclass(frozen=True)
class MomentEstimate:
    q: int
    k: int
    parity_filter: str
    empirical: float
    predicted: float
    ratio: float
    C_k: float
    local_factor: float
    empty: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        return {"q": d["q"], "k": d["k"], "filter": d["parity_filter"],
                "empirical": d["empirical"], "predicted": d["predicted"],
                "ratio": d["ratio"], "C_k": d["C_k"], "local_factor": d["local_factor"]}


def _check_order(k: int) -> None:
    if k < 1:
        raise ParameterError(f"order k must be >= 1, got {k}")


@lru_cache(maxsize=8)
def _mobius(N: int) -> np.ndarray:
    mu = _core.mobius_sieve(N)
    mu.setflags(write=False)
    return mu


def rk_sieve(k: int, N: int) -> RkTable:
    """r_k(0..N) from k-1 convolutions of the Moebius sieve with itself."""
    _check_order(k)
    if N < 1:
        raise ParameterError(f"bound N must be >= 1, got {N}")
    mu = _mobius(N)
    vals = mu.copy()
    for _ in range(k - 1):
        vals = _core.dirichlet_convolve(vals, mu)
    return RkTable(k, N, vals)


def rk_ap_sum(k: int, x: int, q: int, a: int) -> int:
    """Exact sum of r_k(n) over n <= x with n = a (mod q)."""
    if q < 1:
        raise ParameterError(f"modulus must be positive, got {q}")
    if math.gcd(a, q) != 1:
        raise ResidueError(f"residue {a} is not coprime to {q}")
    if x < 1:
        return 0
    vals = rk_sieve(k, x).values
    start = a % q or q
    return int(vals[start::q].sum())


def rk_ap_indicator(k: int, x: int, q: int) -> float:
    """max over residues a coprime to q of |sum_{n<=x, n=a (q)} r_k(n)| / sqrt(x).

    An empirical consistency indicator only; nothing is asserted about it.
    """
    vals = rk_sieve(k, x).values
    sums = np.bincount(np.arange(x + 1) % q, weights=vals, minlength=q)
    coprime = np.array([math.gcd(a, q) == 1 for a in range(q)])
    return float(np.max(np.abs(sums[coprime]))) / math.sqrt(x)


def _log_local_terms(k: int, p: np.ndarray) -> np.ndarray:
    """log E_p(k) for each prime in ``p``."""
    inv = 1.0 / (p.astype(np.float64) ** 2)
    acc = np.zeros_like(inv)
    pw = np.ones_like(inv)
    for v in range(1, k + 1):
        pw = pw * inv
        acc += math.comb(k, v) ** 2 * pw
    return np.log1p(acc)


def euler_ck(k: int, P: int = DEFAULT_PRIME_CUTOFF) -> EulerProduct:
    """C(k) truncated to primes p <= P, with a rigorous upper tail width.

    log of the missing factors is below k^2/(P-1) + (binom(2k,k)-1-k^2)/(3P^3)
    (from sum_{n>P} n^-2 < 1/(P-1) and sum_{n>P} n^-4 < 1/(3P^3)).
    """
    _check_order(k)
    if P < 2:
        raise ParameterError(f"prime cutoff must be >= 2, got {P}")
    logs = _log_local_terms(k, primes_up_to(P))
    value = math.exp(_core.compensated_sum(logs))
    rest = math.comb(2 * k, k) - 1 - k * k
    tail_log = k * k / (P - 1) + rest / (3.0 * P**3)
    return EulerProduct(value, value * math.expm1(tail_log))


def local_factor(k: int, q: int) -> float:
    """prod_{p | q} E_p(k)^{-1}."""
    _check_order(k)
    if q < 1:
        raise ParameterError(f"modulus must be positive, got {q}")
    if q == 1:
        return 1.0
    ps = np.array(prime_divisors(q), dtype=np.int64)
    return math.exp(-float(np.sum(_log_local_terms(k, ps))))


def diag_series(k: int, q: int, N: int) -> float:
    """sum_{m <= N, (m, q) = 1} r_k(m)^2 / m^2."""
    _check_order(k)
    r = rk_sieve(k, N).values[1:].astype(np.float64)
    m = np.arange(1, N + 1)
    terms = (r / m) ** 2
    for p in (prime_divisors(q) if q > 1 else []):
        terms[p - 1::p] = 0.0
    return _core.compensated_sum(terms)


def _filter_mask(ltab: LTable, parity_filter: str) -> np.ndarray:
    if parity_filter == "even":
        return ltab.even_mask
    if parity_filter == "odd":
        return ~ltab.even_mask
    if parity_filter == "all":
        return np.ones(len(ltab), dtype=bool)
    raise ParameterError(f"parity filter must be one of {PARITY_FILTERS}, got {parity_filter!r}")


def neg_moment(ltab: LTable, k: int, parity_filter: str = "even") -> float:
    """sum of |L(1, chi)|^{-2k} over nonprincipal chi in the parity family."""
    _check_order(k)
    mask = _filter_mask(ltab, parity_filter)
    if not mask.any():
        warnings.warn(f"no nonprincipal {parity_filter} characters mod {ltab.q}",
                      EmptyFamilyWarning, stacklevel=2)
        return 0.0
    absl = np.abs(ltab.values[mask])
    return _core.compensated_sum(absl ** (-2.0 * k))


def predicted_moment(k: int, q: int, parity_filter: str, ck: float | None = None) -> float:
    ck = euler_ck(k).value if ck is None else ck
    main = ck * euler_phi(q) * local_factor(k, q)
    return main if parity_filter == "all" else main / 2


def moment_report(q: int, k: int, parity_filter: str = "even",
                  P: int = DEFAULT_PRIME_CUTOFF, ltab: LTable | None = None) -> MomentEstimate:
    """Empirical moment against the main-term prediction for prime ``q``.

    The ratio is reported, never asserted: the error term has no explicit
    constant.
    """
    _check_order(k)
    if parity_filter not in PARITY_FILTERS:
        raise ParameterError(f"parity filter must be one of {PARITY_FILTERS}")
    if ltab is None:
        ltab = l1_table(build_group(q))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", EmptyFamilyWarning)
        emp = neg_moment(ltab, k, parity_filter)
    ck = euler_ck(k, P).value
    lf = local_factor(k, q)
    pred = predicted_moment(k, q, parity_filter, ck)
    return MomentEstimate(q=q, k=k, parity_filter=parity_filter, empirical=emp,
                          predicted=pred, ratio=emp / pred, C_k=ck, local_factor=lf,
                          empty=bool(caught))
