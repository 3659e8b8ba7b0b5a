import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcovar.errors import DimensionError, ValidationError
from qcovar.generators import gell_mann, random_density, random_hermitian
from qcovar.hermitian import (
    as_density,
    as_hermitian,
    as_observables,
    devectorize,
    factor,
    independent_subset,
    is_psd,
    orthonormal_basis,
    real_span_rank,
    vectorize,
)

from conftest import I2, SX, SY, SZ

R2 = np.sqrt(2.0)


def test_vectorize_identity():
    np.testing.assert_allclose(vectorize(I2), [R2, 0, 0, 0], atol=1e-15)


def test_vectorize_sigma_x():
    np.testing.assert_allclose(vectorize(SX), [0, R2, 0, 0], atol=1e-15)


def test_basis_order_n2_is_pauli():
    basis = orthonormal_basis(2) * R2
    for got, want in zip(basis, [I2, SX, SY, SZ]):
        np.testing.assert_array_equal(got, want)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_basis_orthonormal(n):
    b = orthonormal_basis(n)
    gram = np.einsum("aij,bji->ab", b, b)
    np.testing.assert_allclose(gram, np.eye(n * n), atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_vectorize_matches_trace_against_basis(n, rng):
    # oracle: coordinate a is Tr(B_a A) with the explicit basis matrices
    a = random_hermitian(rng, n)
    expected = np.einsum("aij,ji->a", orthonormal_basis(n), a).real
    np.testing.assert_allclose(vectorize(a), expected, atol=1e-12)


@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_vectorize_isometry(n, seed):
    rng = np.random.default_rng(seed)
    a, b = random_hermitian(rng, n), random_hermitian(rng, n)
    lhs = vectorize(a) @ vectorize(b)
    rhs = np.trace(a @ b)
    assert abs(rhs.imag) < 1e-12
    scale = np.linalg.norm(a) * np.linalg.norm(b)
    assert abs(lhs - rhs.real) <= 1e-10 * scale


@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_devectorize_roundtrip(n, seed):
    a = random_hermitian(np.random.default_rng(seed), n)
    back = devectorize(vectorize(a))
    assert np.linalg.norm(back - a) <= 1e-12 * np.linalg.norm(a)


def test_vectorize_stack():
    stack = np.array([SX, SY, SZ])
    np.testing.assert_allclose(vectorize(stack), R2 * np.eye(4)[1:], atol=1e-15)


def test_span_rank_pauli_basis():
    assert real_span_rank([I2, SX, SY, SZ]) == 4


def test_span_rank_collinear():
    assert real_span_rank([SX, 2 * SX]) == 1


def test_span_rank_gell_mann_3():
    assert real_span_rank(np.concatenate([np.eye(3)[None], gell_mann(3)])) == 9


def test_span_rank_dimension_mismatch():
    with pytest.raises(DimensionError):
        real_span_rank([I2, np.eye(3)])


@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_span_rank_orthogonal_and_dependent(n, seed):
    rng = np.random.default_rng(seed)
    basis = orthonormal_basis(n)
    pick = rng.choice(n * n, size=rng.integers(1, n * n + 1), replace=False)
    assert real_span_rank(basis[pick]) == len(pick)
    mats = [random_hermitian(rng, n) for _ in range(3)]
    combo = 0.3 * mats[0] - 1.7 * mats[1] + 0.2 * mats[2]
    assert real_span_rank(mats + [combo]) < 4


def test_is_psd_examples():
    assert is_psd(np.diag([1.0, 0.0]))
    assert not is_psd(SZ)
    # eigenvalues 1/2 +- 0.6
    assert not is_psd(I2 / 2 + 0.6 * SX)


def test_factor_projection():
    f = factor(np.diag([1.0, 0.0]))
    assert f.rank == 1
    np.testing.assert_allclose(np.abs(f.Y), [[1.0], [0.0]], atol=1e-15)


def test_factor_maximally_mixed():
    f = factor(I2 / 2)
    assert f.rank == 2
    np.testing.assert_allclose(f.matrix(), I2 / 2, atol=1e-15)
    np.testing.assert_allclose(f.Y.conj().T @ f.Y, I2 / 2, atol=1e-15)


def test_factor_rank_two_of_three():
    f = factor(np.diag([0.7, 0.3, 0.0]))
    assert f.rank == 2
    np.testing.assert_allclose(np.linalg.eigvalsh(f.Y.conj().T @ f.Y), [0.3, 0.7], atol=1e-14)


@given(st.integers(1, 8), st.data())
def test_factor_reconstructs_every_rank(n, data):
    rank = data.draw(st.integers(1, n))
    seed = data.draw(st.integers(0, 2**32 - 1))
    d = random_density(np.random.default_rng(seed), n, rank)
    f = factor(d)
    assert f.rank == rank
    assert np.linalg.norm(f.matrix() - d) <= 1e-10
    # spectrum of Y*Y is the positive spectrum of D
    pos = np.sort(np.linalg.eigvalsh(d))[-rank:]
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(f.Y.conj().T @ f.Y)), pos, atol=1e-9)
    assert np.linalg.svd(f.Y, compute_uv=False).min() > 1e-9 * np.linalg.svd(f.Y, compute_uv=False).max()


def test_factor_zero_guard():
    with pytest.raises(ValidationError):
        factor(np.zeros((2, 2)))


def test_as_hermitian_symmetrizes_within_tolerance():
    a = SX + 1e-11 * np.array([[0, 1], [0, 0]])
    h = as_hermitian(a)
    np.testing.assert_array_equal(h, h.conj().T)
    assert np.all(np.diag(h).imag == 0)
    with pytest.raises(ValidationError):
        as_hermitian(SX + 1e-6 * np.array([[0, 1], [0, 0]]))


def test_as_density_projects_and_rejects():
    d = as_density(np.diag([1 + 5e-10, -5e-10]))
    assert np.linalg.eigvalsh(d).min() >= 0
    assert np.trace(d).real == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValidationError):
        as_density(np.diag([1.1, -0.1]))
    with pytest.raises(ValidationError):
        as_density(np.diag([0.6, 0.6]))
    with pytest.raises(DimensionError):
        as_density(np.ones((2, 3)))


def test_as_observables_reduces_dependent_tuple():
    with pytest.warns(UserWarning, match="dropping"):
        xs = as_observables([SX, SZ, 2 * SX])
    assert len(xs) == 2
    with pytest.raises(ValidationError):
        as_observables([SX, 2 * SX], reduce=False)
    assert independent_subset([SX, 2 * SX, SY]) == [0, 2]
