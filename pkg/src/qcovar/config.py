"""Tolerance ladder shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_TOL = "QCOVAR_TOL"


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds.

    ``rank`` is relative to the largest singular value / eigenvalue; all the
    others are absolute.
    """

    rank: float = 1e-9
    psd: float = 1e-9
    trace: float = 1e-9
    herm: float = 1e-9
    member: float = 1e-9
    recon: float = 1e-8
    var: float = 1e-8
    merge: float = 1e-8
    max_nodes: int = 100_000

    def with_global(self, tol: float) -> "Tolerances":
        """Override the validation and membership tolerances with one value."""
        return replace(self, psd=tol, trace=tol, herm=tol, member=tol)

    def updated(self, overrides: dict | None) -> "Tolerances":
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        return replace(self, **overrides)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT = Tolerances()


def from_env(base: Tolerances = DEFAULT) -> Tolerances:
    value = os.environ.get(ENV_TOL)
    if value is None or value == "":
        return base
    return base.with_global(float(value))
