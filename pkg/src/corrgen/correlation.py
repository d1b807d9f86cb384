"""Core probability objects and scalar functionals.

A classical correlation is a joint distribution over a pair of labels,
stored as a nonnegative matrix of unit total mass.  Everything downstream
(condition checks, factorization searches, channel extraction) consumes
these objects, so validation is strict and instances are immutable.

All logarithms are base 2; 0·log 0 = 0 by continuity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json
import math

import numpy as np

MASS_TOL = 1e-12


class CorrelationError(ValueError):
    """Raised for inputs that do not describe a valid joint distribution."""


@dataclass(frozen=True)
class Correlation:
    """Joint distribution of a label pair as an n×m nonnegative matrix.

    The constructor accepts any nonnegative matrix with positive total
    mass.  If the mass differs from 1 by more than ``MASS_TOL`` the matrix
    is renormalized and ``renormalized`` is set, so distributions written
    with integer numerators (e.g. ``[[1, 4], [4, 0]]``) are accepted
    directly.

    Instances are immutable after construction and safe to share.
    """

    matrix: np.ndarray
    renormalized: bool = field(default=False, compare=False)

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.size == 0:
            raise CorrelationError("correlation must be a non-empty 2-d matrix")
        if not np.all(np.isfinite(m)):
            raise CorrelationError("correlation entries must be finite")
        if np.any(m < 0):
            raise CorrelationError("correlation entries must be nonnegative")
        mass = m.sum()
        if mass <= 0:
            raise CorrelationError("correlation must have positive total mass")
        renorm = abs(mass - 1.0) > MASS_TOL
        if renorm:
            m = m / mass
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "renormalized", renorm)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    @property
    def size_bits(self) -> float:
        """Half the label bits, ⌈log₂ n⌉ and ⌈log₂ m⌉ rounded per party.

        Display-only quantity used in report text.
        """
        bits_x = math.ceil(math.log2(self.n)) if self.n > 1 else 0
        bits_y = math.ceil(math.log2(self.m)) if self.m > 1 else 0
        return (bits_x + bits_y) / 2

    def transpose(self) -> "Correlation":
        return Correlation(self.matrix.T)

    def rows(self) -> np.ndarray:
        """Unnormalized rows P_x of P, as an (n, m) array."""
        return self.matrix

    def is_product(self, tol: float = 1e-12) -> bool:
        outer = np.outer(marginal_x(self), marginal_y(self))
        return bool(np.max(np.abs(self.matrix - outer)) <= tol)

    # -- JSON interchange ({"matrix": [[...]]}) --

    def to_json_dict(self) -> dict:
        return {"matrix": self.matrix.tolist()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Correlation":
        if not isinstance(data, dict) or "matrix" not in data:
            raise CorrelationError('correlation JSON must contain a "matrix" key')
        return cls(data["matrix"])

    @classmethod
    def from_json(cls, text: str) -> "Correlation":
        return cls.from_json_dict(json.loads(text))


def marginal_x(P: Correlation) -> np.ndarray:
    """Marginal of the first label: row sums of P."""
    return P.matrix.sum(axis=1)


def marginal_y(P: Correlation) -> np.ndarray:
    """Marginal of the second label: column sums of P."""
    return P.matrix.sum(axis=0)


def shannon_entropy(v) -> float:
    """Entropy −Σ v_i log₂ v_i in bits of a probability vector."""
    v = np.asarray(v, dtype=float)
    if np.any(v < 0):
        raise CorrelationError("entropy input must be nonnegative")
    if abs(v.sum() - 1.0) > 1e-9:
        raise CorrelationError("entropy input must sum to 1")
    pos = v[v > 0]
    return float(-np.sum(pos * np.log2(pos)))


def mutual_information(P: Correlation) -> float:
    """Mutual information I(P) in bits between the two labels.

    Zero-probability cells contribute nothing; the result is clamped at 0
    to absorb −0.0 from rounding.
    """
    px = marginal_x(P)
    py = marginal_y(P)
    prod = np.outer(px, py)
    mask = P.matrix > 0
    terms = P.matrix[mask] * np.log2(P.matrix[mask] / prod[mask])
    return max(float(terms.sum()), 0.0)


def classical_fidelity(p, q) -> float:
    """Bhattacharyya overlap Σ √(p_i q_i) of two nonnegative vectors.

    Unnormalized inputs are allowed (the fidelity-sum condition uses raw
    rows of P).
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise CorrelationError("fidelity arguments must have equal length")
    if np.any(p < 0) or np.any(q < 0):
        raise CorrelationError("fidelity arguments must be nonnegative")
    return float(np.sum(np.sqrt(p * q)))
