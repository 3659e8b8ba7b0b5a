"""Extreme points of the feasible set {D density : Tr(D X_i) = 0}.

A density ``D = Y Y*`` of rank r is extreme iff the compressions
``Y* X_i Y`` together with ``Y* Y`` span the r^2-dimensional space H_r.
Equivalently the sandwiches ``D X_i D`` together with ``D^2`` have real
rank r^2. When the span is deficient, any Hermitian ``Q`` orthogonal to all
compressions gives a traceless perturbation ``S = Y Q Y*`` with
``D +- eps S`` still feasible.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .config import DEFAULT, Tolerances
from .covariance import expectations
from .errors import DimensionError, NotFeasibleError
from .hermitian import (
    FactoredDensity,
    devectorize,
    factor,
    hermitian_part,
    numerical_rank,
    real_span_rank,
    vectorize,
)

SPANNING = "spanning"
SANDWICH = "sandwich"
COMPRESSED_IDENTITY = "compressed-identity"


@dataclass(frozen=True)
class Perturbation:
    S: np.ndarray  # n x n, S = Y Q Y*
    Q: np.ndarray  # r x r, unit Frobenius norm

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.Q))


@dataclass(frozen=True)
class ExtremalityReport:
    extreme: bool
    rank: int
    span_rank: int
    criterion: str
    perturbation: Perturbation | None = None

    @property
    def required(self) -> int:
        return self.rank * self.rank

    def as_dict(self) -> dict:
        return {
            "extreme": self.extreme,
            "rank": self.rank,
            "span_rank": self.span_rank,
            "required": self.required,
            "criterion": self.criterion,
        }


def rank_bound(k: int) -> int:
    """Largest possible rank of an extreme density for k observables."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return isqrt(k + 1)


def compress(f: FactoredDensity, xs: np.ndarray) -> np.ndarray:
    """``[Y* X_1 Y, ..., Y* X_k Y, Y* Y]`` as a ``(k + 1, r, r)`` array."""
    xs = np.asarray(xs, dtype=complex)
    y = f.Y
    if xs.ndim != 3 or xs.shape[1] != y.shape[0]:
        raise DimensionError(f"factor has {y.shape[0]} rows, observables have shape {xs.shape}")
    yh = y.conj().T
    comp = yh @ xs @ y
    return hermitian_part(np.concatenate([comp, (yh @ y)[None]]))


def find_perturbation(
    f: FactoredDensity, xs: np.ndarray, rank_tol: float = DEFAULT.rank
) -> Perturbation | None:
    """Unit-norm ``Q`` in the null space of ``Q -> (Tr Q Y*Y, Tr Q Y*X_iY)``.

    Picks the right singular vector with the smallest singular value, signed
    so that its largest-magnitude coordinate is positive. Returns None when
    the null space is trivial.
    """
    r = f.rank
    constraints = vectorize(compress(f, xs))
    _, s, vh = np.linalg.svd(constraints, full_matrices=True)
    if numerical_rank(s, rank_tol) >= r * r:
        return None
    q = vh[-1]
    if q[np.argmax(np.abs(q))] < 0:
        q = -q
    qm = devectorize(q)
    return Perturbation(S=hermitian_part(f.Y @ qm @ f.Y.conj().T), Q=qm)


def _require_feasible(d: np.ndarray, xs: np.ndarray, tol: float) -> None:
    means = expectations(d, xs)
    worst = float(np.max(np.abs(means))) if means.size else 0.0
    if worst > tol:
        raise NotFeasibleError(
            f"density is not in the feasible set: max |Tr(D X_i)| = {worst:.3g} > {tol:.3g}; "
            "center the observables first (X_i - Tr(D X_i) I)"
        )


def is_extreme(d: np.ndarray, xs: np.ndarray, tols: Tolerances = DEFAULT) -> ExtremalityReport:
    """Spanning test on the compressions ``Y* X_i Y`` and ``Y* Y``."""
    xs = np.asarray(xs, dtype=complex)
    _require_feasible(d, xs, tols.member)
    f = factor(d, tols.rank)
    span = real_span_rank(compress(f, xs), tols.rank)
    extreme = span == f.rank**2
    pert = None if extreme else find_perturbation(f, xs, tols.rank)
    return ExtremalityReport(extreme, f.rank, span, SPANNING, pert)


def is_extreme_sandwich(
    d: np.ndarray, xs: np.ndarray, tols: Tolerances = DEFAULT
) -> ExtremalityReport:
    """Rank test on ``D X_i D`` and ``D^2``; needs no factorization for the verdict."""
    d = np.asarray(d, dtype=complex)
    xs = np.asarray(xs, dtype=complex)
    _require_feasible(d, xs, tols.member)
    r = numerical_rank(np.linalg.eigvalsh(hermitian_part(d)), tols.rank)
    sandwiches = np.concatenate([d @ xs @ d, (d @ d)[None]])
    span = real_span_rank(hermitian_part(sandwiches), tols.rank)
    extreme = span == r * r
    pert = None if extreme else find_perturbation(factor(d, tols.rank), xs, tols.rank)
    return ExtremalityReport(extreme, r, span, SANDWICH, pert)


def check(
    d: np.ndarray, xs: np.ndarray, criterion: str = SPANNING, tols: Tolerances = DEFAULT
) -> ExtremalityReport:
    if criterion == SPANNING:
        return is_extreme(d, xs, tols)
    if criterion == SANDWICH:
        return is_extreme_sandwich(d, xs, tols)
    raise ValueError(f"unknown criterion {criterion!r}")
