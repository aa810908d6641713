"""Short-generator recovery experiment at the level of log-embedding vectors.

A generator g is simulated by its log vector, ln of the moduli of 2n i.i.d.
normal pairs; the attacker sees Log g' = Log g + sum_j a_j b_j and recovers a
by Babai round-off. Success is exact recovery of a, which happens iff every
dual overlap of Log g lies in [-1/2, 1/2).
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import binomtest, norm

from .arith import is_prime
from .errors import ModulusError, ParameterError
from .unitlat import (ZETA2_OVER_ZETA4, FastDual, LogUnitBasis,
                      babai_decode, build_basis, dual_direct)

log = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061
C_L = 12.0 * math.exp(EULER_GAMMA) / math.pi**2
DEFAULT_EXPONENT_BOUND = 10
C_R_CAVEAT = ("bounds assume t >= C_r, a universal constant that is not "
              "quantified; the precondition is not verified")


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    a: np.ndarray = field(repr=False)
    a_hat: np.ndarray = field(repr=False)
    max_overlap: float
    success: bool


@dataclass(frozen=True)
class Bounds:
    q: int
    t_new: float
    alpha_new: float
    t_old: float
    alpha_old: float
    nu_old_bound: float
    nu_asymptotic: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ExperimentReport:
    q: int
    r: float
    trials: int
    successes: int
    empirical_rate: float
    wilson_ci: tuple[float, float]
    t_new: float
    alpha_new: float
    t_old: float
    alpha_old: float
    seed: int
    exponent_bound: int
    max_overlap_max: float
    boundary_mismatches: int
    records: list[TrialRecord] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "q": self.q, "r": self.r, "r_meaning": "standard deviation",
            "trials": self.trials, "successes": self.successes,
            "empirical_rate": self.empirical_rate,
            "wilson_ci": list(self.wilson_ci),
            "t_new": self.t_new, "alpha_new": self.alpha_new,
            "t_old": self.t_old, "alpha_old": self.alpha_old,
            "seed": self.seed, "exponent_bound": self.exponent_bound,
            "max_overlap_max": self.max_overlap_max,
            "boundary_mismatches": self.boundary_mismatches,
            "caveat": C_R_CAVEAT,
        }

    def record_rows(self) -> list[dict]:
        return [{"seed": rec.seed, "success": rec.success, "max_overlap": rec.max_overlap}
                for rec in self.records]


@dataclass(frozen=True)
class TailReport:
    n: int
    ell: int
    r: float
    t: float
    trials: int
    hits: int
    empirical: float
    bound: float
    ci_low: float
    ci_high: float
    checked: bool
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def trial_seed(seed: int, index: int) -> int:
    """64-bit seed for trial ``index``, a pure function of (seed, index)."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def _log_gaussian(rng: np.random.Generator, n: int, r: float) -> np.ndarray:
    x = rng.normal(0.0, r, size=(2, n))
    return np.log(np.hypot(x[0], x[1]))


def sample_log_gaussian(n: int, r: float, seed: int) -> np.ndarray:
    """(ln sqrt(X_i^2 + X_i'^2))_i with X, X' i.i.d. N(0, r^2); r is the std dev."""
    if n < 1:
        raise ParameterError(f"dimension must be >= 1, got {n}")
    if not r > 0:
        raise ParameterError(f"scale r must be positive, got {r}")
    return _log_gaussian(np.random.default_rng(seed), n, r)


def run_trial(basis: LogUnitBasis, dual, r: float, bound: int = DEFAULT_EXPONENT_BOUND,
              seed: int = 0, exponents=None) -> TrialRecord:
    """One recovery attempt. ``exponents`` overrides the sampled a (same g)."""
    if basis.q < 5:
        raise ModulusError(f"recovery needs q >= 5, got {basis.q}")
    if not r > 0:
        raise ParameterError(f"scale r must be positive, got {r}")
    rng = np.random.default_rng(seed)
    log_g = _log_gaussian(rng, basis.n, r)
    a = rng.integers(-bound, bound, size=basis.rank, endpoint=True)
    if exponents is not None:
        a = np.asarray(exponents, dtype=np.int64)
    target = log_g + basis.combine(a)
    a_hat = babai_decode(dual, target)
    max_overlap = float(np.max(np.abs(dual.overlaps(log_g))))
    return TrialRecord(seed=seed, a=a, a_hat=a_hat, max_overlap=max_overlap,
                       success=bool(np.array_equal(a_hat, a)))


def theoretical_bounds(q: int) -> Bounds:
    if q < 5:
        raise ModulusError(f"bounds need q >= 5, got {q}")
    t_new = math.sqrt(q / ZETA2_OVER_ZETA4) / (4.0 * math.sqrt(2.0))
    lnln = math.log(math.log(q))
    t_old = math.sqrt(q) / (4.0 * math.sqrt(2.0) * C_L * lnln)
    return Bounds(
        q=q,
        t_new=t_new, alpha_new=1.0 - (q - 3) * math.exp(-t_new / 2),
        t_old=t_old, alpha_old=1.0 - (q - 3) * math.exp(-t_old / 2),
        nu_old_bound=4.0 * C_L**2 * lnln**2 / q,
        nu_asymptotic=4.0 * ZETA2_OVER_ZETA4 / q,
    )


def run_experiment(q: int, r: float = 1.0, trials: int = 100, seed: int = 0,
                   bound: int = DEFAULT_EXPONENT_BOUND, workers: int = 1,
                   path: str = "fast", keep_records: bool = False) -> ExperimentReport:
    """Monte Carlo success rate of round-off recovery for prime ``q``.

    Trial i uses ``trial_seed(seed, i)``, so the report does not depend on
    ``workers``.
    """
    if q < 5 or not is_prime(q):
        raise ModulusError(f"experiment needs a prime q >= 5, got {q}")
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if seed < 0:
        raise ParameterError(f"seed must be non-negative, got {seed}")
    basis = build_basis(q)
    if path == "fast":
        dual = FastDual(basis)
        basis.combine(np.zeros(basis.rank))  # warm the cached transform before threading
    elif path == "direct":
        dual = dual_direct(basis)
    else:
        raise ParameterError(f"unknown dual path {path!r}")

    def one(i: int) -> TrialRecord:
        return run_trial(basis, dual, r, bound, trial_seed(seed, i))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, range(trials)))
    else:
        records = [one(i) for i in range(trials)]

    successes = sum(rec.success for rec in records)
    mismatches = 0
    for rec in records:
        if rec.success != (rec.max_overlap < 0.5):
            mismatches += 1
            log.warning("rounding boundary hit: seed=%d max_overlap=%r", rec.seed, rec.max_overlap)
    b = theoretical_bounds(q)
    return ExperimentReport(
        q=q, r=float(r), trials=trials, successes=successes,
        empirical_rate=successes / trials, wilson_ci=wilson_interval(successes, trials),
        t_new=b.t_new, alpha_new=b.alpha_new, t_old=b.t_old, alpha_old=b.alpha_old,
        seed=seed, exponent_bound=bound,
        max_overlap_max=max(rec.max_overlap for rec in records),
        boundary_mismatches=mismatches,
        records=records if keep_records else [],
    )


def default_directions(n: int, ell: int) -> np.ndarray:
    """Unit vectors orthogonal to the all-ones vector.

    Normalized dual vectors of the q = 2n+1 basis when that q is a prime
    small enough for the direct dual; otherwise (e_j - e_{j+1})/sqrt(2).
    """
    q = 2 * n + 1
    if is_prime(q) and 5 <= q <= 4001 and ell <= n - 1:
        D = dual_direct(build_basis(q)).vectors[:ell]
        return D / np.linalg.norm(D, axis=1)[:, None]
    if ell > n - 1:
        raise ParameterError(f"at most {n - 1} default directions in dimension {n}")
    A = np.zeros((ell, n))
    idx = np.arange(ell)
    A[idx, idx] = 1.0
    A[idx, idx + 1] = -1.0
    return A / math.sqrt(2.0)


def tail_check(n: int, ell: int, r: float, t: float, trials: int, seed: int,
               directions=None, chunk: int = 4096, sigmas: float = 3.0) -> TailReport:
    """Empirical P(exists j: |<a_j, ln X_hat>| >= t) against 2 ell e^{-t/2}.

    The check is skipped when the bound is at least 1; otherwise it passes if
    the lower end of the ``sigmas``-wide Wilson interval is within the bound.
    """
    if not r > 0:
        raise ParameterError(f"scale r must be positive, got {r}")
    if not t > 0:
        raise ParameterError(f"threshold t must be positive, got {t}")
    A = default_directions(n, ell) if directions is None else np.atleast_2d(
        np.asarray(directions, dtype=np.float64))
    if A.shape != (ell, n):
        raise ParameterError(f"directions must have shape ({ell}, {n}), got {A.shape}")
    if not np.allclose(np.linalg.norm(A, axis=1), 1.0) or not np.allclose(A.sum(axis=1), 0.0):
        raise ParameterError("directions must be unit vectors orthogonal to all-ones")
    hits = 0
    done = 0
    block = 0
    while done < trials:
        m = min(chunk, trials - done)
        rng = np.random.default_rng(trial_seed(seed, block))
        x = rng.normal(0.0, r, size=(2, m, n))
        proj = np.log(np.hypot(x[0], x[1])) @ A.T
        hits += int(np.count_nonzero(np.any(np.abs(proj) >= t, axis=1)))
        done += m
        block += 1
    bound = 2.0 * ell * math.exp(-t / 2)
    conf = 1.0 - 2.0 * norm.sf(sigmas)
    lo, hi = wilson_interval(hits, trials, conf)
    checked = bound < 1.0
    return TailReport(n=n, ell=ell, r=float(r), t=float(t), trials=trials, hits=hits,
                      empirical=hits / trials, bound=bound, ci_low=lo, ci_high=hi,
                      checked=checked, passed=(lo <= bound) if checked else True)
