import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sgplab.chargroup import build_group
from sgplab.errors import ModulusError, ShapeError
from sgplab.lfun import l1_table
from sgplab.unitlat import (FastDual, asymptotic_ratio, babai_decode, build_basis,
                            dual_apply_fast, dual_direct, dual_norm_via_L, fold)

LN_PHI = math.log((1 + math.sqrt(5)) / 2)
NU_Q5 = 1 / (2 * LN_PHI**2)


def log_embedding_of_cyclotomic_unit(q, j):
    """log|sigma_i(b_j)| with b_j = (zeta^j - 1)/(zeta - 1), from complex arithmetic."""
    n = (q - 1) // 2
    out = []
    for i in range(1, n + 1):
        zeta_i = cmath.exp(2j * math.pi * i / q)
        out.append(math.log(abs((zeta_i**j - 1) / (zeta_i - 1))))
    return np.array(out)


def test_fold():
    assert [int(fold(m, 7)) for m in range(1, 7)] == [1, 2, 3, 3, 2, 1]


@pytest.mark.parametrize("q", [5, 7, 11, 13, 29])
def test_rows_match_complex_embeddings(q):
    basis = build_basis(q)
    B = basis.rows()
    for idx, j in enumerate(basis.labels):
        np.testing.assert_allclose(B[idx], log_embedding_of_cyclotomic_unit(q, j), atol=1e-12)
        np.testing.assert_allclose(basis.row(j), B[idx], atol=0)


def test_q5_basis():
    basis = build_basis(5)
    np.testing.assert_allclose(basis.rows(), [[LN_PHI, -LN_PHI]], atol=1e-15)
    assert basis.rows().sum() == pytest.approx(0, abs=1e-15)
    assert LN_PHI == pytest.approx(0.4812118, abs=1e-7)


def test_q3_empty_and_rejects():
    assert build_basis(3).rows().shape == (0, 1)
    for q in (9, 15, 2):
        with pytest.raises(ModulusError):
            build_basis(q)


@pytest.mark.parametrize("q", [5, 7, 11, 101, 211, 503])
def test_rows_sum_to_zero_and_full_rank(q):
    B = build_basis(q).rows()
    assert np.abs(B.sum(axis=1)).max() < 1e-10
    if q <= 211:
        assert np.linalg.matrix_rank(B) == (q - 1) // 2 - 1


def test_dual_q5_closed_form():
    dual = dual_direct(build_basis(5))
    assert dual.nu == pytest.approx(NU_Q5, abs=1e-12)
    np.testing.assert_allclose(dual.vectors, [[1 / (2 * LN_PHI), -1 / (2 * LN_PHI)]], atol=1e-12)
    assert dual_norm_via_L(l1_table(build_group(5))) == pytest.approx(NU_Q5, abs=1e-12)


@pytest.mark.parametrize("q", [7, 11, 101, 211])
def test_dual_invariants(q):
    basis = build_basis(q)
    dual = dual_direct(basis)
    D, B = dual.vectors, basis.rows()
    np.testing.assert_allclose(D @ B.T, np.eye(basis.rank), atol=1e-8)
    assert np.abs(D.sum(axis=1)).max() < 1e-9
    norms = dual.norms_sq
    assert (norms.max() - norms.min()) / norms.mean() < 1e-9


@pytest.mark.parametrize("q", [5, 7, 11, 101, 503])
def test_dual_norm_two_routes(q):
    nu_direct = dual_direct(build_basis(q)).nu
    nu_l = dual_norm_via_L(l1_table(build_group(q)))
    assert abs(nu_direct - nu_l) / nu_l <= 1e-8


def test_asymptote_trend_recorded():
    rhos = [asymptotic_ratio(q, dual_norm_via_L(l1_table(build_group(q))))
            for q in (101, 1009, 10007)]
    errs = [abs(r - 1) for r in rhos]
    assert errs[0] > errs[1] > errs[2]


def test_babai_examples_q5():
    basis = build_basis(5)
    dual = dual_direct(basis)
    b2 = basis.rows()[0]
    assert list(babai_decode(dual, 3 * b2)) == [3]
    e = np.array([0.1, -0.1])
    assert dual.overlaps(e)[0] == pytest.approx(0.2078, abs=1e-4)
    assert list(babai_decode(dual, 3 * b2 + e)) == [3]
    e = np.array([0.3, -0.3])
    assert dual.overlaps(e)[0] == pytest.approx(0.6234, abs=1e-4)
    assert list(babai_decode(dual, 3 * b2 + e)) == [4]
    with pytest.raises(ShapeError):
        babai_decode(dual, np.zeros(3))


def test_babai_half_open_rounding():
    class Fixed:
        def overlaps(self, target):
            return np.asarray(target)

    got = babai_decode(Fixed(), [0.5, -0.5, 1.5, -1.5, 0.4999999, -0.5000001, 2.0])
    assert list(got) == [1, 0, 2, -1, 0, -1, 2]


@pytest.mark.parametrize("q", [5, 11, 101])
def test_babai_recovers_lattice_points(q):
    basis = build_basis(q)
    B = basis.rows()
    rng = np.random.default_rng(q)
    for dual in (dual_direct(basis), FastDual(basis)):
        for _ in range(200):
            a = rng.integers(-10, 10, size=basis.rank, endpoint=True)
            np.testing.assert_array_equal(babai_decode(dual, a @ B), a)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_babai_translation_invariance(seed):
    basis = build_basis(11)
    dual = dual_direct(basis)
    rng = np.random.default_rng(seed)
    t = rng.normal(size=basis.n)
    ov = dual.overlaps(t)
    if np.min(np.abs(ov - np.floor(ov) - 0.5)) < 1e-6:
        return  # too close to a rounding boundary
    a = rng.integers(-10, 10, size=basis.rank, endpoint=True)
    np.testing.assert_array_equal(babai_decode(dual, t + basis.combine(a)),
                                  a + babai_decode(dual, t))


@pytest.mark.parametrize("q", [5, 7, 11, 13, 101, 211, 503])
def test_fast_dual_equals_naive(q):
    basis = build_basis(q)
    dual = dual_direct(basis)
    rng = np.random.default_rng(1)
    for _ in range(3):
        t = rng.normal(size=basis.n) * 3 + 5
        np.testing.assert_allclose(dual_apply_fast(basis, t), dual.overlaps(t), atol=1e-8)
    np.testing.assert_allclose(dual_apply_fast(basis, np.ones(basis.n)), 0, atol=1e-9)


def test_fast_dual_small_examples():
    basis = build_basis(5)
    np.testing.assert_allclose(dual_apply_fast(basis, basis.rows()[0]), [1.0], atol=1e-12)
    with pytest.raises(ShapeError):
        dual_apply_fast(basis, np.zeros(5))


@pytest.mark.parametrize("q", [5, 7, 101, 503])
def test_combine_matches_rows(q):
    basis = build_basis(q)
    a = np.random.default_rng(2).integers(-10, 10, size=basis.rank, endpoint=True)
    np.testing.assert_allclose(basis.combine(a), a @ basis.rows(), atol=1e-9)
