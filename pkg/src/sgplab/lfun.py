"""L(1, chi) for nonprincipal characters mod a prime.

Two independent routes:

* finite closed forms with Gauss-sum prefactors (``l1_closed``, ``l1_table``);
* the truncated Dirichlet series with an Abel tail correction (``l1_series``),
  used as the oracle for the closed forms.

For even chi::

    L(1, chi) = -(tau(chi)/q) * sum_a conj(chi)(a) log(2 sin(pi a/q))

and for odd chi::

    L(1, chi) = (i pi tau(chi)/q) * B1(conj chi),   B1(psi) = (1/q) sum_a psi(a) a
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _core
from .chargroup import (CharacterGroup, _check_nonprincipal, gauss_sum,
                        gauss_sums_all)
from .serialize import dumps_csv, dumps_json


@dataclass(frozen=True, eq=False)
class LTable:
    """L(1, chi_t) for t = 1..q-2, stored at ``values[t - 1]``."""
    q: int
    values: np.ndarray
    method: str = "closed-form"
    ts: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ts", np.arange(1, self.q - 1))

    def __getitem__(self, t: int) -> complex:
        if not 1 <= t <= self.q - 2:
            raise KeyError(t)
        return complex(self.values[t - 1])

    def __len__(self) -> int:
        return len(self.values)

    @property
    def even_mask(self) -> np.ndarray:
        return self.ts % 2 == 0

    def parities(self) -> np.ndarray:
        return np.where(self.even_mask, 1, -1)

    def rows(self) -> list[dict]:
        return [{"t": int(t), "parity": int(p), "re": float(v.real), "im": float(v.imag),
                 "abs": float(abs(v))}
                for t, p, v in zip(self.ts, self.parities(), self.values)]

    def to_dict(self) -> dict:
        return {"q": self.q, "method": self.method, "values": self.rows()}

    def to_json(self) -> str:
        return dumps_json(self.to_dict())

    def to_csv(self) -> str:
        return dumps_csv(self.rows(), ["t", "parity", "re", "im", "abs"])


def _log_sine_weights(q: int, a: np.ndarray) -> np.ndarray:
    return np.log(2.0 * np.sin(np.pi * a / q))


def _csum(z: np.ndarray) -> complex:
    return complex(_core.compensated_sum(np.ascontiguousarray(z.real)),
                   _core.compensated_sum(np.ascontiguousarray(z.imag)))


def l1_closed(grp: CharacterGroup, t: int) -> complex:
    _check_nonprincipal(grp, t)
    q = grp.q
    a = np.arange(1, q)
    chibar = np.conj(grp.character_values(t)[1:])
    tau = gauss_sum(grp, t)
    if t % 2 == 0:
        return -(tau / q) * _csum(chibar * _log_sine_weights(q, a))
    b1 = _csum(chibar * a) / q
    return 1j * np.pi * tau / q * b1


def default_truncation(q: int) -> int:
    return max(10**6, 100 * q)


def _series_all(grp: CharacterGroup, N: int, ts: np.ndarray) -> np.ndarray:
    q = grp.q
    if N < q:
        raise ValueError(f"truncation N={N} must be at least q={q}")
    M = (N // q) * q  # full periods only, so the partial character sum at M is 0
    H = _core.residue_harmonic_sums(q, M)
    a = np.arange(1, q)
    m = grp.order
    chi = grp.roots[(ts[:, None] * grp.dlog[None, a]) % m]
    head = chi @ H[1:]
    # Abel tail: sum_{n>M} S(n)/(n(n+1)) with S periodic; replace S by its mean.
    partial = np.cumsum(chi, axis=1)
    mean_s = (partial.sum(axis=1)) / q  # S(0) = 0 contributes nothing
    return head + mean_s / (M + 1)


def l1_series(grp: CharacterGroup, t: int, N: int | None = None) -> complex:
    """Truncated series sum_{n<=N} chi(n)/n plus a periodic Abel tail term.

    ``N`` is rounded down to a multiple of q. The remaining error is
    O(q^2/N^2), comfortably inside the O(q/N) budget.
    """
    _check_nonprincipal(grp, t)
    N = default_truncation(grp.q) if N is None else N
    return complex(_series_all(grp, N, np.array([t]))[0])


def l1_series_table(grp: CharacterGroup, N: int | None = None) -> LTable:
    N = default_truncation(grp.q) if N is None else N
    ts = np.arange(1, grp.q - 1)
    return LTable(grp.q, _series_all(grp, N, ts), method="series")


def l1_table(grp: CharacterGroup, method: str = "fft") -> LTable:
    """Closed-form L(1, chi_t) for every nonprincipal t.

    ``method="fft"`` reindexes a by its discrete log so that all inner sums
    become one DFT of length q-1; ``method="naive"`` loops over characters.
    """
    q = grp.q
    if method == "naive":
        vals = np.array([l1_closed(grp, t) for t in range(1, q - 1)], dtype=np.complex128)
        return LTable(q, vals)
    if method != "fft":
        raise ValueError(f"unknown method {method!r}")
    pw = grp.powers
    # sum_j w(g^j) e^{-2 pi i t j/(q-1)} = sum_a conj(chi_t)(a) w(a)
    even_sums = np.fft.fft(_log_sine_weights(q, pw))
    odd_sums = np.fft.fft(pw.astype(np.float64))
    tau = gauss_sums_all(grp)
    t = np.arange(q - 1)
    vals = np.where(t % 2 == 0, -(tau / q) * even_sums,
                    1j * np.pi * tau / q * (odd_sums / q))
    return LTable(q, vals[1:].copy())
