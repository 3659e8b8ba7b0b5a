"""Non-commutative covariance matrices and their elementary properties."""

from __future__ import annotations

import numpy as np

from .config import DEFAULT
from .errors import DimensionError


def _check(d: np.ndarray, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = np.asarray(d, dtype=complex)
    xs = np.asarray(xs, dtype=complex)
    if xs.ndim == 2:
        xs = xs[None]
    if d.ndim != 2 or xs.ndim != 3 or xs.shape[1:] != d.shape:
        raise DimensionError(f"density {d.shape} and observables {xs.shape} do not match")
    return d, xs


def expectations(d: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """``Tr(D X_i)`` for each observable (real for Hermitian inputs)."""
    d, xs = _check(d, xs)
    return np.einsum("ab,iba->i", d, xs).real


def covariance(d: np.ndarray, xs: np.ndarray, real: bool = False) -> np.ndarray:
    """``Var_D(X)_ij = Tr(D X_i X_j) - Tr(D X_i) Tr(D X_j)``.

    The result is a complex Hermitian k x k matrix; off-diagonal entries are
    in general not real. ``real=True`` drops the imaginary parts.
    """
    d, xs = _check(d, xs)
    dx = d @ xs
    second = np.einsum("iab,jba->ij", dx, xs)
    mean = np.einsum("iaa->i", dx).real
    cov = second - np.outer(mean, mean)
    return cov.real.copy() if real else cov


def hermiticity_residual(c: np.ndarray) -> float:
    c = np.asarray(c)
    return float(np.max(np.abs(c - c.conj().T))) if c.size else 0.0


def center(d: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Shift each observable by its mean: ``X_i - Tr(D X_i) I``.

    The covariance is unchanged and the shifted tuple has zero mean under ``D``.
    """
    d, xs = _check(d, xs)
    shifts = expectations(d, xs)
    return xs - shifts[:, None, None] * np.eye(d.shape[0])


def shift(xs: np.ndarray, lam) -> np.ndarray:
    """``X_i - lam_i I`` for real scalars ``lam``."""
    xs = np.asarray(xs, dtype=complex)
    lam = np.asarray(lam, dtype=float)
    return xs - lam[:, None, None] * np.eye(xs.shape[-1])


def semi_inner(d: np.ndarray, a: np.ndarray, b: np.ndarray) -> complex:
    """``<A, B>_D = Tr(D A* B)``."""
    d = np.asarray(d, dtype=complex)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if not (d.shape == a.shape == b.shape):
        raise DimensionError(f"shapes {d.shape}, {a.shape}, {b.shape} do not match")
    return complex(np.trace(d @ a.conj().T @ b))


def concavity_defect(d1: np.ndarray, d2: np.ndarray, lam: float, xs: np.ndarray) -> np.ndarray:
    """``Var_D(X) - lam Var_D1(X) - (1 - lam) Var_D2(X)`` with ``D = lam D1 + (1 - lam) D2``.

    Equals ``lam (1 - lam) v v^T`` with ``v_i = Tr((D1 - D2) X_i)``.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {lam}")
    d1, xs = _check(d1, xs)
    d2, _ = _check(d2, xs)
    mix = lam * d1 + (1.0 - lam) * d2
    return covariance(mix, xs) - lam * covariance(d1, xs) - (1.0 - lam) * covariance(d2, xs)


def in_feasible_set(d: np.ndarray, xs: np.ndarray, tol: float = DEFAULT.member) -> bool:
    """``|Tr(D X_i)| <= tol`` for every observable."""
    return bool(np.all(np.abs(expectations(d, xs)) <= tol))
