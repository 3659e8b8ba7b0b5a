import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcovar.covariance import (
    center,
    concavity_defect,
    covariance,
    expectations,
    hermiticity_residual,
    in_feasible_set,
    semi_inner,
    shift,
)
from qcovar.errors import DimensionError
from qcovar.generators import example3, example4, pauli, random_density, random_hermitian
from qcovar.hermitian import factor

from conftest import I2, SX, SY, SZ, rand_problem


def covariance_loop(d, xs):
    k = len(xs)
    out = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            out[i, j] = np.trace(d @ xs[i] @ xs[j]) - np.trace(d @ xs[i]) * np.trace(d @ xs[j])
    return out


@pytest.mark.parametrize("n", [1, 4, 7])
def test_example3_identity(n):
    d, xs = example3(n)
    np.testing.assert_array_equal(covariance(d, xs), np.eye(n))


def test_maximally_mixed_sigma_x():
    assert covariance(I2 / 2, SX[None])[0, 0] == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_example4_all_ones(n):
    d, xs = example4(n, seed=n)
    np.testing.assert_allclose(covariance_loop(d, xs), np.ones((n, n)), atol=1e-12)
    np.testing.assert_allclose(covariance(d, xs), np.ones((n, n)), atol=1e-12)


def test_covariance_matches_loop(rng):
    d, xs = rand_problem(3, 5, 4)
    np.testing.assert_allclose(covariance(d, xs), covariance_loop(d, xs), atol=1e-12)


def test_covariance_is_complex_hermitian():
    d = np.diag([0.8, 0.2]).astype(complex)
    c = covariance(d, np.array([SX, SY]))
    # Tr(D sx sy) = i Tr(D sz) = 0.6i
    assert c[0, 1] == pytest.approx(0.6j, abs=1e-15)
    assert hermiticity_residual(c) < 1e-15
    np.testing.assert_array_equal(covariance(d, np.array([SX, SY]), real=True), c.real)


def test_covariance_dimension_mismatch():
    with pytest.raises(DimensionError):
        covariance(np.eye(3) / 3, pauli())


def test_center_sigma_z():
    d = np.diag([0.8, 0.2]).astype(complex)
    np.testing.assert_allclose(center(d, SZ[None])[0], SZ - 0.6 * I2, atol=1e-15)


def test_center_noop_on_centered():
    xs = pauli()
    np.testing.assert_array_equal(center(I2 / 2, xs), xs)


def test_center_spot_check():
    d, xs = rand_problem(11, 4, 3)
    xc = center(d, xs)
    assert np.max(np.abs(expectations(d, xc))) < 1e-12
    np.testing.assert_allclose(covariance(d, xc), covariance(d, xs), atol=1e-10)


def test_semi_inner_examples():
    assert semi_inner(I2 / 2, SX, SX) == pytest.approx(1.0)
    assert semi_inner(I2 / 2, SX, SY) == pytest.approx(0.0, abs=1e-15)


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_semi_inner_positive(n, seed):
    rng = np.random.default_rng(seed)
    d = random_density(rng, n, int(rng.integers(1, n + 1)))
    a = random_hermitian(rng, n)
    val = semi_inner(d, a, a)
    # Gram oracle: Tr(Y Y* A A) = ||A Y||_F^2
    y = factor(d).Y
    assert val.real == pytest.approx(np.linalg.norm(a @ y) ** 2, abs=1e-10)
    assert val.real >= -1e-10 and abs(val.imag) < 1e-10


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_gram_identity(n, k, seed):
    d, xs = rand_problem(seed, n, k)
    xc = center(d, xs)
    cov = covariance(d, xs)
    gram = np.array([[semi_inner(d, a, b) for b in xc] for a in xc])
    np.testing.assert_allclose(cov, gram, atol=1e-12)


def test_concavity_defect_examples():
    d, xs = rand_problem(5, 3, 2)
    np.testing.assert_allclose(concavity_defect(d, d, 0.3, xs), 0, atol=1e-14)
    e1 = np.diag([1.0, 0.0]).astype(complex)
    e2 = np.diag([0.0, 1.0]).astype(complex)
    np.testing.assert_allclose(concavity_defect(e1, e2, 0.5, SZ[None]), [[1.0]], atol=1e-15)
    with pytest.raises(ValueError):
        concavity_defect(e1, e2, 1.5, SZ[None])


def test_concavity_defect_vanishes_on_feasible_pair():
    # diag(1,0) and diag(0,1) both have zero sigma_x mean
    e1 = np.diag([1.0, 0.0]).astype(complex)
    e2 = np.diag([0.0, 1.0]).astype(complex)
    xs = np.array([SX, SY])
    assert in_feasible_set(e1, xs) and in_feasible_set(e2, xs)
    np.testing.assert_allclose(concavity_defect(e1, e2, 0.37, xs), 0, atol=1e-15)


@given(st.integers(1, 6), st.integers(1, 6), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_concavity_defect_rank_one(n, k, lam, seed):
    rng = np.random.default_rng(seed)
    d1 = random_density(rng, n, int(rng.integers(1, n + 1)))
    d2 = random_density(rng, n, int(rng.integers(1, n + 1)))
    xs = np.array([random_hermitian(rng, n) for _ in range(k)])
    defect = concavity_defect(d1, d2, lam, xs)
    v = np.array([np.trace((d1 - d2) @ x).real for x in xs])
    np.testing.assert_allclose(defect, lam * (1 - lam) * np.outer(v, v), atol=1e-10)
    w = np.linalg.eigvalsh((defect + defect.conj().T) / 2)
    assert w.min() >= -1e-10
    assert np.count_nonzero(w > 1e-9 * max(1.0, w.max())) <= 1


@given(st.integers(1, 8), st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_covariance_psd(n, k, seed):
    d, xs = rand_problem(seed, n, k)
    cov = covariance(d, xs)
    assert hermiticity_residual(cov) <= 1e-12 * max(1.0, np.abs(cov).max())
    assert np.linalg.eigvalsh((cov + cov.conj().T) / 2).min() >= -1e-9


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_shift_invariance(n, k, seed):
    d, xs = rand_problem(seed, n, k)
    lam = np.random.default_rng(seed + 1).normal(scale=3.0, size=k)
    np.testing.assert_allclose(covariance(d, shift(xs, lam)), covariance(d, xs), atol=1e-10)


def test_feasible_set_examples():
    assert in_feasible_set(I2 / 2, pauli())
    assert not in_feasible_set(np.diag([1.0, 0.0]), SZ[None])
    assert in_feasible_set(*example3(5))
