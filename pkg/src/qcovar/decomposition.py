"""Constructive extremal decompositions.

Every non-extreme feasible density ``D = Y Y*`` has a perturbation
``S = Y Q Y*`` with ``Tr S = 0`` and ``Tr S X_i = 0``. Walking along ``S``
in both directions until ``I +- eps Q`` becomes singular yields two feasible
densities of strictly smaller rank whose mixture is ``D``. Repeating on both
halves terminates at extreme densities after at most ``rank(D) - 1`` levels.
All pieces share the same (zero) means, so the covariance splits additively.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Tolerances
from .covariance import center, covariance, expectations
from .errors import BudgetExceeded, NotFeasibleError, ValidationError
from .extremality import Perturbation, find_perturbation, is_extreme, rank_bound
from .hermitian import FactoredDensity, as_observables, factor, hermitian_part, numerical_rank

log = logging.getLogger(__name__)


def max_steps(q: np.ndarray, tol: float = DEFAULT.rank) -> tuple[float, float]:
    """Largest ``eps_plus, eps_minus`` keeping ``I + eps_plus Q`` and ``I - eps_minus Q`` PSD."""
    q = hermitian_part(np.asarray(q, dtype=complex))
    if np.linalg.norm(q) < tol:
        raise ValueError("perturbation is numerically zero")
    w = np.linalg.eigvalsh(q)
    if w[0] >= 0 or w[-1] <= 0:
        raise ValueError(f"perturbation must be indefinite, eigenvalues in [{w[0]:.3g}, {w[-1]:.3g}]")
    return -1.0 / w[0], 1.0 / w[-1]


def _endpoint(f: FactoredDensity, q: np.ndarray, eps: float, rank_tol: float) -> np.ndarray:
    w, v = np.linalg.eigh(np.eye(f.rank) + eps * q)
    w, v = w[::-1], v[:, ::-1]
    keep = w > rank_tol * w[0]
    y = f.Y @ (v[:, keep] * np.sqrt(w[keep]))
    d = hermitian_part(y @ y.conj().T)
    return d / np.trace(d).real


@dataclass(frozen=True)
class SplitResult:
    mu: float
    plus: np.ndarray
    minus: np.ndarray
    eps_plus: float
    eps_minus: float
    perturbation: Perturbation

    def residual(self, d: np.ndarray) -> float:
        return float(np.linalg.norm(self.mu * self.plus + (1 - self.mu) * self.minus - d))


def split_once(d: np.ndarray, xs: np.ndarray, tols: Tolerances = DEFAULT) -> SplitResult:
    """Split a feasible, non-extreme density into two lower-rank feasible densities."""
    worst = np.max(np.abs(expectations(d, xs))) if len(xs) else 0.0
    if worst > tols.member:
        raise NotFeasibleError(f"max |Tr(D X_i)| = {worst:.3g} exceeds {tols.member:.3g}")
    f = factor(d, tols.rank)
    pert = find_perturbation(f, xs, tols.rank)
    if pert is None:
        raise ValueError("density is extreme; it admits no nontrivial split")
    eps_plus, eps_minus = max_steps(pert.Q)
    plus = _endpoint(f, pert.Q, eps_plus, tols.rank)
    minus = _endpoint(f, pert.Q, -eps_minus, tols.rank)
    mu = eps_minus / (eps_plus + eps_minus)
    return SplitResult(mu, plus, minus, eps_plus, eps_minus, pert)


@dataclass(frozen=True)
class ExtremalDecomposition:
    weights: np.ndarray
    pieces: np.ndarray  # (L, n, n)
    ranks: list[int]
    span_ranks: list[int]
    residuals: dict = field(default_factory=dict)
    leaves_before_merge: int = 0

    def __len__(self) -> int:
        return len(self.weights)


def _residuals(d, xs, centered, weights, pieces) -> dict:
    recon = float(np.linalg.norm(d - np.einsum("l,lab->ab", weights, pieces)))
    var_d = covariance(d, xs)
    var_sum = sum(w * covariance(p, xs) for w, p in zip(weights, pieces))
    member = max((float(np.max(np.abs(expectations(p, centered)))) for p in pieces), default=0.0) \
        if len(centered) else 0.0
    return {
        "reconstruction": recon,
        "covariance_additivity": float(np.linalg.norm(var_d - var_sum)),
        "membership": member,
        "weight_sum": float(abs(np.sum(weights) - 1.0)),
    }


def merge_leaves(leaves, tol: float) -> list[list]:
    """Sum the weights of leaves closer than ``tol`` in Frobenius norm; first occurrence wins."""
    merged: list[list] = []
    for weight, piece, *cert in leaves:
        for m in merged:
            if np.linalg.norm(m[1] - piece) < tol:
                m[0] += weight
                break
        else:
            merged.append([weight, piece, *cert])
    return merged


def decompose(d: np.ndarray, xs: np.ndarray, tols: Tolerances = DEFAULT) -> ExtremalDecomposition:
    """Decompose ``d`` into extreme densities of the centered feasible set.

    Depth-first, plus branch first; identical leaves are merged.
    """
    xs = np.asarray(xs, dtype=complex)
    centered = center(d, xs)
    kept = as_observables(centered, tols) if _nonzero(centered, tols) else centered[:0]

    leaves: list[tuple[float, np.ndarray, int, int]] = []
    stack = [(1.0, np.asarray(d, dtype=complex))]
    nodes = 0
    split_residual = 0.0
    while stack:
        weight, node = stack.pop()
        nodes += 1
        if nodes > tols.max_nodes:
            raise BudgetExceeded(f"decomposition exceeded {tols.max_nodes} nodes", node=node)
        report = is_extreme(node, kept, tols)
        if report.extreme:
            leaves.append((weight, node, report.rank, report.span_rank))
            continue
        s = split_once(node, kept, tols)
        split_residual = max(split_residual, s.residual(node))
        stack.append(((1 - s.mu) * weight, s.minus))
        stack.append((s.mu * weight, s.plus))

    merged = merge_leaves(leaves, tols.merge)
    log.debug("visited %d nodes, %d leaves, %d after merging", nodes, len(leaves), len(merged))

    weights = np.array([m[0] for m in merged])
    pieces = np.array([m[1] for m in merged])
    res = _residuals(d, xs, centered, weights, pieces)
    res["split"] = split_residual
    return ExtremalDecomposition(
        weights=weights,
        pieces=pieces,
        ranks=[m[2] for m in merged],
        span_ranks=[m[3] for m in merged],
        residuals=res,
        leaves_before_merge=len(leaves),
    )


def _nonzero(xs: np.ndarray, tols: Tolerances) -> bool:
    return bool(len(xs)) and float(np.max(np.abs(xs))) > tols.herm


# --- verification ----------------------------------------------------------

@dataclass
class Check:
    passed: bool
    value: float | list
    threshold: float | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {"passed": self.passed, "value": self.value, "threshold": self.threshold,
                "detail": self.detail}


@dataclass
class VerificationReport:
    checks: dict[str, Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failed(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]

    def as_dict(self) -> dict:
        return {"passed": self.passed, "checks": {k: c.as_dict() for k, c in self.checks.items()}}


def verify(
    d: np.ndarray,
    xs: np.ndarray,
    weights,
    pieces,
    tols: Tolerances = DEFAULT,
    k: int | None = None,
) -> VerificationReport:
    """Recompute every decomposition invariant from scratch.

    ``k`` is the tuple size used for the rank bound (defaults to ``len(xs)``).
    """
    d = np.asarray(d, dtype=complex)
    xs = np.asarray(xs, dtype=complex)
    weights = np.asarray(weights, dtype=float)
    pieces = np.asarray(pieces, dtype=complex)
    k = len(xs) if k is None else k
    checks: dict[str, Check] = {}

    if pieces.ndim != 3 or len(pieces) != len(weights) or pieces.shape[1:] != d.shape:
        checks["shapes"] = Check(False, [list(pieces.shape), len(weights)], None,
                                 "pieces and weights do not match the problem")
        return VerificationReport(checks)

    checks["weights_positive"] = Check(bool(weights.min() > 0), float(weights.min()), 0.0)
    wsum = float(abs(weights.sum() - 1.0))
    checks["weights_sum"] = Check(wsum <= 1e-9, wsum, 1e-9)

    worst_density = 0.0
    for p in pieces:
        herm = float(np.max(np.abs(p - p.conj().T)))
        neg = float(max(0.0, -np.linalg.eigvalsh(hermitian_part(p))[0]))
        tr = float(abs(np.trace(p).real - 1.0))
        worst_density = max(worst_density, herm, neg, tr)
    tol_density = max(tols.herm, tols.psd, tols.trace)
    checks["pieces_are_densities"] = Check(worst_density <= tol_density, worst_density, tol_density)

    recon = float(np.linalg.norm(d - np.einsum("l,lab->ab", weights, pieces)))
    checks["reconstruction"] = Check(recon <= tols.recon, recon, tols.recon)

    centered = center(d, xs)
    member = max(float(np.max(np.abs(expectations(p, centered)))) for p in pieces)
    checks["membership"] = Check(member <= tols.member, member, tols.member)

    certs = []
    all_extreme = True
    for p in pieces:
        try:
            rep = is_extreme(p, centered, tols)
            certs.append([rep.rank, rep.span_rank])
            all_extreme &= rep.extreme
        except (NotFeasibleError, ValidationError) as exc:
            certs.append([None, None])
            all_extreme = False
            log.debug("extremality recheck failed: %s", exc)
    checks["extremality"] = Check(all_extreme, certs, None, "[rank, span_rank] per piece")

    bound = rank_bound(k) if k >= 1 else 1
    worst_rank = max(numerical_rank(np.linalg.eigvalsh(hermitian_part(p)), tols.rank)
                     for p in pieces)
    checks["rank_bound"] = Check(worst_rank <= bound, worst_rank, float(bound))

    var_d = covariance(d, xs)
    var_sum = sum(w * covariance(p, xs) for w, p in zip(weights, pieces))
    add = float(np.linalg.norm(var_d - var_sum))
    checks["covariance_additivity"] = Check(add <= tols.var, add, tols.var)
    return VerificationReport(checks)


def verify_decomposition(d, xs, dec: ExtremalDecomposition, tols: Tolerances = DEFAULT,
                         k: int | None = None) -> VerificationReport:
    return verify(d, xs, dec.weights, dec.pieces, tols, k)
