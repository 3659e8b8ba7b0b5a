"""Fixtures and seeded random problem instances."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .covariance import center
from .hermitian import gell_mann_matrices, independent_subset

KINDS = ("pauli", "gellmann", "example3", "example4", "padded", "random")


def pauli() -> np.ndarray:
    """``(sigma_x, sigma_y, sigma_z)``."""
    return np.array(
        [
            [[0, 1], [1, 0]],
            [[0, -1j], [1j, 0]],
            [[1, 0], [0, -1]],
        ],
        dtype=complex,
    )


def gell_mann(n: int) -> np.ndarray:
    """The n^2 - 1 generalized Gell-Mann matrices, normalized to ``Tr l_a l_b = 2 delta_ab``.

    Order: symmetric ``E_jk + E_kj`` for j < k, antisymmetric ``-i E_jk + i E_kj``,
    then the n - 1 diagonal ones. For n = 2 this is exactly the Pauli triple.
    """
    return gell_mann_matrices(n)


def example3(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``D = diag(1, 0, ..., 0)`` on C^{n+1} and ``X_i = E_{0,i} + E_{i,0}``.

    The covariance is exactly the n x n identity.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    d = np.zeros((n + 1, n + 1), dtype=complex)
    d[0, 0] = 1.0
    xs = np.zeros((n, n + 1, n + 1), dtype=complex)
    for i in range(n):
        xs[i, 0, i + 1] = xs[i, i + 1, 0] = 1.0
    return d, xs


def example4_default_x(n: int) -> np.ndarray:
    """``x_m = sqrt(n) (2m - n - 1) / c`` with ``c^2 = n (n^2 - 1) / 3``, so sum x = 0, sum x^2 = n."""
    m = np.arange(1, n + 1)
    return np.sqrt(n) * (2 * m - n - 1) / np.sqrt(n * (n * n - 1) / 3.0)


def example4(n: int, x=None, xtilde=None, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """``D = I_n / n (+) 0_n`` and ``X_i = diag(x) (+) Xtilde_i`` for i = 1..n.

    With ``sum x = 0`` and ``sum x^2 = n`` the covariance is the all-ones
    matrix. The other commonly quoted normalization, ``sum n x^2 = 1``, gives
    entries ``1 / n^2`` instead and is rejected here. ``xtilde`` defaults to
    seeded random Hermitians (they never enter the covariance).
    """
    if n <= 2:
        raise ValueError(f"n must exceed 2, got {n}")
    x = example4_default_x(n) if x is None else np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"x must have length {n}")
    if abs(x.sum()) > 1e-9 or abs(np.dot(x, x) - n) > 1e-9:
        raise ValueError("x must satisfy sum(x) = 0 and sum(x^2) = n")
    if xtilde is None:
        rng = np.random.default_rng(seed)
        xtilde = [random_hermitian(rng, n) for _ in range(n)]
    xtilde = np.asarray(xtilde, dtype=complex)
    if xtilde.shape != (n, n, n):
        raise ValueError(f"need {n} Hermitians of size {n}")
    d = np.zeros((2 * n, 2 * n), dtype=complex)
    d[:n, :n] = np.eye(n) / n
    xs = np.zeros((n, 2 * n, 2 * n), dtype=complex)
    xs[:, :n, :n] = np.diag(x)
    xs[:, n:, n:] = xtilde
    return d, xs


def padded_gellmann(
    n: int, k: int, m: int, seed: int = 0, drop: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Extreme density ``I_n / n (+) 0_m`` of rank ``n = floor(sqrt(k + 1))``.

    The tuple is the Gell-Mann matrices padded by ``0_m`` followed by
    ``k - n^2 + 1`` seeded random Hermitians on the second block. ``drop``
    removes one Gell-Mann matrix, which destroys extremality.
    """
    if n < 2 or n != isqrt(k + 1):
        raise ValueError(f"need n = floor(sqrt(k + 1)) >= 2, got n={n}, k={k}")
    extra = k - (n * n - 1)
    if m < 1 or m * m < extra:
        raise ValueError(f"m={m} cannot host {extra} independent Hermitians")
    rng = np.random.default_rng(seed)
    tail = []
    while len(tail) < extra:
        cand = random_hermitian(rng, m)
        if len(independent_subset(tail + [cand])) == len(tail) + 1:
            tail.append(cand)
    size = n + m
    gm = gell_mann(n)
    if drop is not None:
        gm = np.delete(gm, drop, axis=0)
    xs = np.zeros((len(gm) + extra, size, size), dtype=complex)
    xs[: len(gm), :n, :n] = gm
    for j, t in enumerate(tail):
        xs[len(gm) + j, n:, n:] = t
    d = np.zeros((size, size), dtype=complex)
    d[:n, :n] = np.eye(n) / n
    return d, xs


# --- random instances ------------------------------------------------------

def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_density(rng: np.random.Generator, n: int, rank: int) -> np.ndarray:
    """Unitarily rotated diagonal density; nonzero eigenvalues stay >= 0.1 / rank-ish."""
    if not 1 <= rank <= n:
        raise ValueError(f"rank must be in [1, {n}], got {rank}")
    spec = np.zeros(n)
    spec[:rank] = rng.uniform(0.1, 1.0, rank)
    spec /= spec.sum()
    u = random_unitary(rng, n)
    d = (u * spec) @ u.conj().T
    d = (d + d.conj().T) / 2
    return d / np.trace(d).real


@dataclass(frozen=True)
class InstanceSpec:
    kind: str = "random"
    n: int = 3
    k: int = 2
    rank: int | None = None
    seed: int = 0
    m: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "gellmann" and self.k != self.n * self.n - 1:
            raise ValueError("gellmann requires k = n^2 - 1")


def random_instance(spec: InstanceSpec, centered: bool = True, max_tries: int = 100):
    """Seeded density of the requested rank and k independent observables.

    With ``centered`` the observables are shifted to have zero mean under the
    density, so the pair is a feasible problem. That requires ``k <= n^2 - 1``.
    """
    n, k = spec.n, spec.k
    rank = n if spec.rank is None else spec.rank
    limit = n * n - 1 if centered else n * n
    if k < 1 or k > limit:
        raise ValueError(f"k must be in [1, {limit}] for n = {n}, got {k}")
    rng = np.random.default_rng(spec.seed)
    d = random_density(rng, n, rank)
    for _ in range(max_tries):
        xs = np.array([random_hermitian(rng, n) for _ in range(k)])
        if centered:
            xs = center(d, xs)
        if len(independent_subset(xs)) == k:
            return d, xs
    raise RuntimeError("could not draw an independent observable tuple")


def fixture(kind: str, n: int = 2, k: int | None = None, rank: int | None = None,
            seed: int = 0, m: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Problem ``(D, X)`` addressed by name, as exposed on the command line."""
    if kind == "pauli":
        return np.eye(2, dtype=complex) / 2, pauli()
    if kind == "gellmann":
        return np.eye(n, dtype=complex) / n, gell_mann(n)
    if kind == "example3":
        return example3(n)
    if kind == "example4":
        return example4(n, seed=seed)
    if kind == "padded":
        k = n * n - 1 if k is None else k
        return padded_gellmann(n, k, m, seed)
    if kind == "random":
        return random_instance(InstanceSpec("random", n, 1 if k is None else k, rank, seed))
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
