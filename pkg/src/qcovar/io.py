"""JSON problem and solution files.

Complex numbers are ``[re, im]`` pairs and matrices are row-major lists of
rows. Floats go through ``repr``, which round-trips binary64 exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import Tolerances
from .errors import ValidationError
from .hermitian import as_density, as_observables


class ParseError(ValueError):
    """File is unreadable, not JSON, or misses required fields."""


def matrix_to_json(a) -> list:
    a = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(obj, what: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: not a numeric array ({exc})") from None
    if arr.ndim != 3 or arr.shape[-1] != 2 or arr.shape[0] != arr.shape[1]:
        raise ParseError(f"{what}: expected an n x n array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False, allow_nan=False) + "\n"


def write_json(obj, path: str | Path | None) -> None:
    text = dumps(obj)
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)


def read_json(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: top level must be an object")
    return obj


@dataclass
class Problem:
    D: np.ndarray
    X: np.ndarray
    tolerances: dict | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.D.shape[0]

    @property
    def k(self) -> int:
        return len(self.X)

    def to_json(self) -> dict:
        out = {"n": self.n, "k": self.k, "D": matrix_to_json(self.D),
               "X": [matrix_to_json(x) for x in self.X]}
        if self.tolerances:
            out["tolerances"] = dict(self.tolerances)
        if self.meta:
            out["meta"] = dict(self.meta)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Problem":
        for key in ("D", "X"):
            if key not in obj:
                raise ParseError(f"problem is missing field {key!r}")
        d = matrix_from_json(obj["D"], "D")
        if not isinstance(obj["X"], list) or not obj["X"]:
            raise ParseError("X must be a nonempty list of matrices")
        xs = [matrix_from_json(x, f"X[{i}]") for i, x in enumerate(obj["X"])]
        if any(x.shape != d.shape for x in xs):
            raise ParseError("observables and density have different dimensions")
        if obj.get("n", d.shape[0]) != d.shape[0] or obj.get("k", len(xs)) != len(xs):
            raise ParseError("declared n/k do not match the matrices")
        tol = obj.get("tolerances")
        if tol is not None and not isinstance(tol, dict):
            raise ParseError("tolerances must be an object")
        return cls(d, np.array(xs), tol, obj.get("meta") or {})

    def validated(self, tols: Tolerances) -> "Problem":
        """Projected copy; raises :class:`ValidationError` on invariant violations."""
        d = as_density(self.D, tols, "D")
        xs = as_observables(self.X, tols, reduce=True)
        return Problem(d, xs, self.tolerances, self.meta)


def load_problem(path) -> Problem:
    return Problem.from_json(read_json(path))


@dataclass
class Solution:
    weights: np.ndarray
    pieces: np.ndarray
    ranks: list
    span_ranks: list
    residuals: dict
    config: dict
    shifts: list | None = None

    def to_json(self) -> dict:
        out = {
            "weights": [float(w) for w in self.weights],
            "pieces": [matrix_to_json(p) for p in self.pieces],
            "certificates": {"ranks": list(self.ranks), "span_ranks": list(self.span_ranks)},
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "config": self.config,
        }
        if self.shifts is not None:
            out["shifts"] = [float(s) for s in self.shifts]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Solution":
        try:
            weights = np.asarray(obj["weights"], dtype=float)
            pieces = [matrix_from_json(p, f"pieces[{i}]") for i, p in enumerate(obj["pieces"])]
            certs = obj.get("certificates", {})
        except KeyError as exc:
            raise ParseError(f"solution is missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ParseError(f"malformed solution: {exc}") from None
        if weights.ndim != 1 or len(pieces) != len(weights) or not pieces:
            raise ParseError("weights and pieces must be nonempty lists of equal length")
        if len({p.shape for p in pieces}) != 1:
            raise ParseError("pieces have different shapes")
        return cls(weights, np.array(pieces), certs.get("ranks", []), certs.get("span_ranks", []),
                   obj.get("residuals", {}), obj.get("config", {}), obj.get("shifts"))


def load_solution(path) -> Solution:
    return Solution.from_json(read_json(path))


__all__ = ["ParseError", "Problem", "Solution", "ValidationError", "load_problem",
           "load_solution", "matrix_from_json", "matrix_to_json", "write_json", "dumps"]
