import math

import numpy as np
import pytest
from scipy.special import zeta

from sgplab.errors import ModulusError, ParameterError
from sgplab.sgpsim import (C_L, EULER_GAMMA, run_experiment, run_trial, sample_log_gaussian,
                           tail_check, theoretical_bounds, trial_seed, wilson_interval)
from sgplab.unitlat import FastDual, build_basis, dual_direct


def test_constants():
    assert EULER_GAMMA == pytest.approx(np.euler_gamma, abs=1e-16)
    assert C_L == pytest.approx(12 * math.exp(np.euler_gamma) / math.pi**2)
    assert zeta(4) / zeta(2) == pytest.approx(math.pi**2 / 15, rel=1e-14)


def test_log_gaussian_mean():
    x = sample_log_gaussian(10**6, 1.0, seed=11)
    # E ln sqrt(X^2 + X'^2) = (ln 2 - gamma)/2 for unit normals
    assert x.mean() == pytest.approx((math.log(2) - np.euler_gamma) / 2, abs=0.002)
    assert (math.log(2) - np.euler_gamma) / 2 == pytest.approx(0.0579658, abs=1e-7)


def test_log_gaussian_determinism_and_scaling():
    a = sample_log_gaussian(1000, 1.0, 3)
    np.testing.assert_array_equal(a, sample_log_gaussian(1000, 1.0, 3))
    assert not np.array_equal(a, sample_log_gaussian(1000, 1.0, 4))
    np.testing.assert_allclose(sample_log_gaussian(1000, 7.5, 3), a + math.log(7.5), atol=1e-12)
    for bad in (0.0, -1.0):
        with pytest.raises(ParameterError):
            sample_log_gaussian(10, bad, 0)


def test_trial_seed_is_pure():
    assert trial_seed(7, 3) == trial_seed(7, 3)
    assert len({trial_seed(7, i) for i in range(1000)}) == 1000
    assert 0 <= trial_seed(7, 0) < 2**64


def test_run_trial_contract_q5():
    basis = build_basis(5)
    dual = dual_direct(basis)
    seen = set()
    for seed in range(200):
        rec = run_trial(basis, dual, 1.0, seed=seed)
        assert rec.success == (rec.max_overlap < 0.5)
        other = run_trial(basis, dual, 1.0, seed=seed, exponents=[-7])
        assert other.success == rec.success
        seen.add(rec.success)
    assert seen == {True, False}


def test_run_trial_rejects_q3():
    basis = build_basis(3)
    with pytest.raises(ModulusError):
        run_trial(basis, FastDual(basis), 1.0)


def test_q5_success_probability_is_one_over_sqrt5():
    # overlap = L/(4 ln phi) with L standard logistic, so P(success) = tanh(ln phi) = 1/sqrt 5
    rep = run_experiment(5, 1.0, 4000, seed=1)
    lo, hi = wilson_interval(rep.successes, rep.trials, 0.999)
    assert lo <= 1 / math.sqrt(5) <= hi


def test_tiny_r_does_not_change_outcomes():
    tiny = run_experiment(5, 0.01, 100, seed=9)
    unit = run_experiment(5, 1.0, 100, seed=9)
    assert tiny.successes == unit.successes
    assert tiny.max_overlap_max == pytest.approx(unit.max_overlap_max, abs=1e-12)


def test_q101_recovery_equivalence_and_scale_invariance():
    rep = run_experiment(101, 1.0, 10**4, seed=2, keep_records=True)
    assert rep.boundary_mismatches == 0
    assert all(rec.success == (rec.max_overlap < 0.5) for rec in rep.records)
    assert 0 < rep.empirical_rate < 1  # recorded: the bound is vacuous at q=101
    rep2 = run_experiment(101, 2.0, 10**4, seed=2)
    lo, hi = rep.wilson_ci
    assert lo <= rep2.empirical_rate <= hi


def test_fast_and_direct_paths_agree():
    a = run_experiment(101, 1.0, 300, seed=4, path="fast").to_dict()
    b = run_experiment(101, 1.0, 300, seed=4, path="direct").to_dict()
    assert a["successes"] == b["successes"]
    assert a["max_overlap_max"] == pytest.approx(b["max_overlap_max"], abs=1e-9)


def test_experiment_independent_of_workers():
    one = run_experiment(211, 1.0, 64, seed=5, workers=1)
    many = run_experiment(211, 1.0, 64, seed=5, workers=8)
    assert one.to_dict() == many.to_dict()


def test_experiment_validation():
    for kwargs in ({"q": 4}, {"q": 3}, {"q": 7, "trials": 0}, {"q": 7, "seed": -1},
                   {"q": 7, "path": "other"}):
        with pytest.raises((ModulusError, ParameterError)):
            run_experiment(**kwargs)


def test_theoretical_bounds_q40009():
    b = theoretical_bounds(40009)
    assert b.t_new == pytest.approx(math.pi * math.sqrt(40009) / (4 * math.sqrt(30)), rel=1e-14)
    assert b.t_new == pytest.approx(28.68, abs=0.01)
    assert b.alpha_new == pytest.approx(0.9763, abs=1e-4)
    assert b.t_old == pytest.approx(6.92, abs=0.01)
    assert b.alpha_old < 0
    assert b.nu_old_bound > b.nu_asymptotic


def test_bounds_new_beats_old_for_large_q():
    for q in (1009, 10007, 40009, 100003):
        b = theoretical_bounds(q)
        assert b.t_new > b.t_old and b.alpha_new > b.alpha_old


def test_tail_check_example():
    a = np.zeros(500)
    a[:2] = (1, -1)
    a /= math.sqrt(2)
    rep = tail_check(500, 1, 1.0, 6.0, 20_000, seed=1, directions=a[None])
    assert rep.bound == pytest.approx(2 * math.exp(-3))
    assert rep.checked and rep.passed


def test_tail_check_vacuous_bound_skipped():
    rep = tail_check(50, 1, 1.0, 0.1, 500, seed=1)
    assert rep.bound >= 1 and not rep.checked and rep.passed


def test_tail_check_duplicated_directions():
    a = np.zeros(20)
    a[:2] = (1, -1)
    a /= math.sqrt(2)
    single = tail_check(20, 1, 1.0, 3.0, 20_000, seed=2, directions=a[None])
    double = tail_check(20, 2, 1.0, 3.0, 20_000, seed=2, directions=np.vstack([a, a]))
    assert double.bound == pytest.approx(2 * single.bound)
    assert double.hits == single.hits
    assert double.passed


def test_tail_check_default_dual_directions():
    rep = tail_check(50, 10, 1.0, 12.0, 5000, seed=3)  # 2n+1 = 101 prime
    assert rep.checked and rep.passed


def test_tail_check_rejects_bad_directions():
    with pytest.raises(ParameterError):
        tail_check(4, 1, 1.0, 1.0, 10, 0, directions=[[1.0, 0, 0, 0]])
