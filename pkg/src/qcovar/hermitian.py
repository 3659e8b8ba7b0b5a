"""Hermitian matrices as elements of the real Hilbert space H_n.

Coordinates are taken in a fixed orthonormal basis for the trace inner
product ``<A, B> = Tr AB``::

    index 0                       I / sqrt(n)
    next n(n-1)/2 (j < k, row-major)   (E_jk + E_kj) / sqrt(2)
    next n(n-1)/2 (j < k, row-major)   (-i E_jk + i E_kj) / sqrt(2)
    last n-1 (l = 1..n-1)         diag(1, .., 1, -l, 0, ..) / sqrt(l(l+1))

i.e. the normalized identity followed by the generalized Gell-Mann matrices
(symmetric, antisymmetric, diagonal) rescaled to unit norm.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DimensionError, ValidationError


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return (a + np.swapaxes(a, -1, -2).conj()) / 2


def _square(a, what: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"{what} must be a nonempty square matrix, got shape {a.shape}")
    return a


def as_hermitian(a, tol: float = DEFAULT.herm, what: str = "matrix") -> np.ndarray:
    """Validate Hermiticity within ``tol`` (max entry) and return the exact Hermitian part."""
    a = _square(a, what)
    err = np.max(np.abs(a - a.conj().T))
    if not np.isfinite(err) or err > tol:
        raise ValidationError(f"{what} is not Hermitian (max |A - A*| = {err:.3g} > {tol:.3g})")
    return hermitian_part(a)


def as_density(a, tols: Tolerances = DEFAULT, what: str = "density") -> np.ndarray:
    """Validate a density matrix and project it onto the exact PSD, unit-trace set."""
    d = as_hermitian(a, tols.herm, what)
    w, v = np.linalg.eigh(d)
    if w[0] < -tols.psd:
        raise ValidationError(f"{what} is not positive semidefinite (min eigenvalue {w[0]:.3g})")
    tr = np.trace(d).real
    if abs(tr - 1.0) > tols.trace:
        raise ValidationError(f"{what} does not have unit trace (Tr = {tr:.17g})")
    if w[0] < 0:
        d = hermitian_part((v * np.clip(w, 0.0, None)) @ v.conj().T)
        tr = np.trace(d).real
    return d / tr


def is_psd(a: np.ndarray, tol: float = DEFAULT.psd) -> bool:
    return bool(np.linalg.eigvalsh(hermitian_part(np.asarray(a, dtype=complex)))[0] >= -tol)


def numerical_rank(values: np.ndarray, rank_tol: float = DEFAULT.rank) -> int:
    """Count entries of a nonnegative spectrum above ``rank_tol * max``."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0
    top = values.max()
    if top <= 0:
        return 0
    return int(np.count_nonzero(values > rank_tol * top))


# --- coordinates -----------------------------------------------------------

@lru_cache(maxsize=None)
def _diag_transform(n: int) -> np.ndarray:
    h = np.zeros((n, n))
    h[0] = 1.0 / np.sqrt(n)
    for l in range(1, n):
        c = 1.0 / np.sqrt(l * (l + 1))
        h[l, :l] = c
        h[l, l] = -l * c
    return h


def vectorize(a: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix (or a stack of them)."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[-1]
    j, k = np.triu_indices(n, 1)
    upper = a[..., j, k]
    diag = np.diagonal(a, axis1=-2, axis2=-1).real
    dcoords = diag @ _diag_transform(n).T
    root2 = np.sqrt(2.0)
    return np.concatenate(
        [dcoords[..., :1], root2 * upper.real, -root2 * upper.imag, dcoords[..., 1:]], axis=-1
    )


def devectorize(c: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    c = np.asarray(c, dtype=float)
    n = int(round(np.sqrt(c.shape[-1])))
    if n * n != c.shape[-1]:
        raise DimensionError(f"coordinate length {c.shape[-1]} is not a perfect square")
    m = n * (n - 1) // 2
    sym = c[..., 1 : 1 + m]
    anti = c[..., 1 + m : 1 + 2 * m]
    dcoords = np.concatenate([c[..., :1], c[..., 1 + 2 * m :]], axis=-1)
    out = np.zeros(c.shape[:-1] + (n, n), dtype=complex)
    j, k = np.triu_indices(n, 1)
    upper = (sym - 1j * anti) / np.sqrt(2.0)
    out[..., j, k] = upper
    out[..., k, j] = upper.conj()
    idx = np.arange(n)
    out[..., idx, idx] = dcoords @ _diag_transform(n)
    return out


def gell_mann_matrices(n: int) -> np.ndarray:
    """Generalized Gell-Mann matrices, ``Tr l_a l_b = 2 delta_ab``, in coordinate order."""
    if n < 2:
        raise ValueError(f"Gell-Mann matrices need n >= 2, got {n}")
    mats = []
    pairs = list(zip(*np.triu_indices(n, 1)))
    for j, k in pairs:
        g = np.zeros((n, n), dtype=complex)
        g[j, k] = g[k, j] = 1.0
        mats.append(g)
    for j, k in pairs:
        g = np.zeros((n, n), dtype=complex)
        g[j, k] = -1j
        g[k, j] = 1j
        mats.append(g)
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -l
        mats.append(np.diag(np.sqrt(2.0 / (l * (l + 1))) * d).astype(complex))
    return np.array(mats)


def orthonormal_basis(n: int) -> np.ndarray:
    """The basis behind :func:`vectorize`, as an ``(n*n, n, n)`` array."""
    ident = np.eye(n, dtype=complex)[None] / np.sqrt(n)
    if n == 1:
        return ident
    return np.concatenate([ident, gell_mann_matrices(n) / np.sqrt(2.0)])


def _stack(mats) -> np.ndarray:
    if isinstance(mats, np.ndarray):
        arr = mats.astype(complex, copy=False)
    else:
        mats = [np.asarray(m, dtype=complex) for m in mats]
        if not mats:
            raise ValueError("empty list of matrices")
        shapes = {m.shape for m in mats}
        if len(shapes) != 1:
            raise DimensionError(f"matrices have mismatched shapes {sorted(shapes)}")
        arr = np.array(mats)
    if arr.ndim != 3 or arr.shape[0] == 0 or arr.shape[1] != arr.shape[2]:
        raise DimensionError(f"expected a nonempty stack of square matrices, got {arr.shape}")
    return arr


def real_span_rank(mats, rank_tol: float = DEFAULT.rank) -> int:
    """Dimension of the real span of Hermitian matrices."""
    coords = vectorize(_stack(mats))
    return numerical_rank(np.linalg.svd(coords, compute_uv=False), rank_tol)


def independent_subset(mats, rank_tol: float = DEFAULT.rank) -> list[int]:
    """Greedy maximal real-linearly independent subset, keeping input order."""
    coords = vectorize(_stack(mats))
    keep: list[int] = []
    for i in range(len(coords)):
        trial = coords[keep + [i]]
        if numerical_rank(np.linalg.svd(trial, compute_uv=False), rank_tol) == len(keep) + 1:
            keep.append(i)
    return keep


def as_observables(xs: Sequence, tols: Tolerances = DEFAULT, reduce: bool = True) -> np.ndarray:
    """Validate a tuple of observables; returns a ``(k, n, n)`` array.

    Real-linearly dependent tuples are cut down to a maximal independent
    subset (with a warning) unless ``reduce`` is false, in which case they
    are rejected.
    """
    xs = list(xs)
    if not xs:
        raise ValidationError("observable tuple is empty")
    arr = _stack([as_hermitian(x, tols.herm, f"X[{i}]") for i, x in enumerate(xs)])
    keep = independent_subset(arr, tols.rank)
    if len(keep) < len(arr):
        if not reduce:
            raise ValidationError(
                f"observables are real-linearly dependent (rank {len(keep)} < {len(arr)})"
            )
        dropped = sorted(set(range(len(arr))) - set(keep))
        warnings.warn(f"dropping linearly dependent observables {dropped}", stacklevel=2)
        arr = arr[keep]
    return arr


# --- factorization ---------------------------------------------------------

@dataclass(frozen=True)
class FactoredDensity:
    """``D = Y Y*`` with ``Y`` of full column rank."""

    Y: np.ndarray

    @property
    def rank(self) -> int:
        return self.Y.shape[1]

    @property
    def n(self) -> int:
        return self.Y.shape[0]

    def matrix(self) -> np.ndarray:
        return hermitian_part(self.Y @ self.Y.conj().T)


def factor(d: np.ndarray, rank_tol: float = DEFAULT.rank) -> FactoredDensity:
    """Eigendecomposition-based factor, eigenvalues in descending order."""
    w, v = np.linalg.eigh(hermitian_part(np.asarray(d, dtype=complex)))
    w, v = w[::-1], v[:, ::-1]
    if w[0] <= 0:
        raise ValidationError("cannot factor a numerically zero matrix")
    keep = w > rank_tol * w[0]
    return FactoredDensity(v[:, keep] * np.sqrt(w[keep]))
