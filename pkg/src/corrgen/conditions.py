"""Necessary-condition checks for "a pure seed can generate P".

Each check compares a functional of the target correlation with a
functional of the seed's squared Schmidt coefficients.  The checks are
necessary only, so the aggregate verdict vocabulary is RULED_OUT /
NOT_RULED_OUT — a passing report never certifies generability.

All comparisons carry an additive slack of ``SLACK`` applied in the
seed's favor: a borderline numerical tie never produces a false
RULED_OUT.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .correlation import (
    Correlation,
    CorrelationError,
    classical_fidelity,
    marginal_x,
    marginal_y,
    mutual_information,
    shannon_entropy,
)

SLACK = 1e-10

#: Default α grid: both monotone regimes of the Rényi family plus the
#: closed-form α=∞ case.
DEFAULT_ALPHAS = (0.5, 0.75, 2.0, 3.0, float("inf"))

RULED_OUT = "RULED_OUT"
NOT_RULED_OUT = "NOT_RULED_OUT"


class SpectrumError(ValueError):
    """Raised for invalid Schmidt spectra or condition parameters."""


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Squared Schmidt coefficients λ of a pure bipartite seed.

    Sorted descending, strictly positive, unit sum.  This is the seed's
    only data relevant to the checks: states with equal Schmidt
    coefficients are interchangeable under local isometries.
    """

    lambdas: np.ndarray

    def __init__(self, lambdas) -> None:
        lam = np.sort(np.array(lambdas, dtype=float))[::-1].copy()
        if lam.ndim != 1 or lam.size == 0:
            raise SpectrumError("spectrum must be a non-empty vector")
        if np.any(lam <= 0):
            raise SpectrumError("squared Schmidt coefficients must be positive")
        if abs(lam.sum() - 1.0) > 1e-9:
            raise SpectrumError("squared Schmidt coefficients must sum to 1")
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)

    @property
    def rank(self) -> int:
        return self.lambdas.size

    def sqrt_lambdas(self) -> np.ndarray:
        """Schmidt coefficients √λ, i.e. the diagonal of Λ."""
        return np.sqrt(self.lambdas)


@dataclass(frozen=True)
class ConditionRecord:
    name: str
    lhs: float
    rhs: float
    satisfied: bool
    alpha: float | None = None

    def to_json_dict(self) -> dict:
        d = {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
             "satisfied": self.satisfied}
        if self.alpha is not None:
            d["alpha"] = "inf" if np.isinf(self.alpha) else self.alpha
        return d


@dataclass(frozen=True)
class ConditionReport:
    records: tuple[ConditionRecord, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def verdict(self) -> str:
        return RULED_OUT if any(not r.satisfied for r in self.records) else NOT_RULED_OUT

    def record(self, name: str, alpha: float | None = None) -> ConditionRecord:
        for r in self.records:
            if r.name == name and (alpha is None or r.alpha == alpha):
                return r
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        return {
            "conditions": [r.to_json_dict() for r in self.records],
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def check_renyi(spectrum: SchmidtSpectrum, P: Correlation, alphas=DEFAULT_ALPHAS):
    """Sandwiched α-Rényi data-processing conditions over an α grid.

    For α ∈ [1/2, 1) the seed side must not exceed the target side; for
    α ∈ (1, ∞) the inequality flips; α = ∞ has a closed max form.
    Zero-probability cells are skipped.
    """
    lam = spectrum.lambdas
    px = marginal_x(P)
    py = marginal_y(P)
    prod = np.outer(px, py)
    mask = P.matrix > 0

    records = []
    for alpha in alphas:
        alpha = float(alpha)
        if alpha == 1.0 or alpha < 0.5 or (not np.isinf(alpha) and alpha <= 0):
            raise SpectrumError(f"alpha must lie in [1/2, 1) ∪ (1, ∞], got {alpha}")
        if np.isinf(alpha):
            lhs = float(np.sum(1.0 / lam))
            rhs = float(np.max(P.matrix[mask] / prod[mask]))
            ok = lhs >= rhs - SLACK
        else:
            lhs = float(np.sum(lam ** (2.0 / alpha - 1.0)) ** alpha)
            rhs = float(np.sum(P.matrix[mask] ** alpha / prod[mask] ** (alpha - 1.0)))
            if alpha < 1.0:
                ok = lhs <= rhs + SLACK
            else:
                ok = lhs >= rhs - SLACK
        records.append(ConditionRecord("renyi", lhs, rhs, ok, alpha=alpha))
    return records


def check_min_schmidt(spectrum: SchmidtSpectrum, P: Correlation) -> ConditionRecord:
    """λ_r against the min over supported cells of P(x)P(y)/P(x,y)."""
    px = marginal_x(P)
    py = marginal_y(P)
    prod = np.outer(px, py)
    mask = P.matrix > 0
    rhs = float(np.min(prod[mask] / P.matrix[mask]))
    lhs = float(spectrum.lambdas[-1])
    return ConditionRecord("min_schmidt", lhs, rhs, lhs <= rhs + SLACK)


def check_holevo(spectrum: SchmidtSpectrum, P: Correlation) -> ConditionRecord:
    """I(P) against the Shannon entropy of the squared Schmidt spectrum."""
    lhs = mutual_information(P)
    rhs = shannon_entropy(spectrum.lambdas)
    return ConditionRecord("holevo", lhs, rhs, lhs <= rhs + SLACK)


def mutual_information_baseline(spectrum: SchmidtSpectrum, P: Correlation) -> ConditionRecord:
    """The weaker doubled-entropy bound I(P) ≤ −2Σλlogλ, for comparison."""
    lhs = mutual_information(P)
    rhs = 2.0 * shannon_entropy(spectrum.lambdas)
    return ConditionRecord("mutual_information_baseline", lhs, rhs, lhs <= rhs + SLACK)


def v2_classical(P: Correlation) -> float:
    """Classical correlation measure V′₂.

    Σ_y (Σ_x P(x)·|P(y|x) − P(y)|²)^{1/2}; rows with zero marginal are
    skipped.  Zero exactly when P is a product distribution.
    """
    px = marginal_x(P)
    py = marginal_y(P)
    keep = px > 0
    cond = P.matrix[keep] / px[keep, None]
    inner = np.sum(px[keep, None] * np.abs(cond - py[None, :]) ** 2, axis=0)
    return float(np.sum(np.sqrt(inner)))


def check_v2(spectrum: SchmidtSpectrum, P: Correlation) -> ConditionRecord:
    """Σλ² against 1 − V′₂²/r with r the seed's Schmidt rank."""
    lhs = float(np.sum(spectrum.lambdas ** 2))
    v2 = v2_classical(P)
    rhs = 1.0 - v2 ** 2 / spectrum.rank
    return ConditionRecord("v2", lhs, rhs, lhs <= rhs + SLACK)


def check_fidelity_sum(spectrum: SchmidtSpectrum, P: Correlation) -> ConditionRecord:
    """Pairwise row-fidelity sum ΣᵢΣⱼF(Pᵢ,Pⱼ)² against Σλ²."""
    rows = P.rows()
    n = rows.shape[0]
    lhs = 0.0
    for i in range(n):
        for j in range(n):
            lhs += classical_fidelity(rows[i], rows[j]) ** 2
    rhs = float(np.sum(spectrum.lambdas ** 2))
    return ConditionRecord("fidelity_sum", lhs, rhs, lhs >= rhs - SLACK)


def check_all(spectrum: SchmidtSpectrum, P: Correlation,
              alphas=DEFAULT_ALPHAS) -> ConditionReport:
    """Run every necessary condition and aggregate into a report.

    RULED_OUT iff at least one record fails.  The report text flags that
    the Σλ² bounds use the seed's Schmidt rank for r, which is
    conservative when the seed rank exceeds the PSD-rank of P.
    """
    records = [
        check_min_schmidt(spectrum, P),
        check_holevo(spectrum, P),
        mutual_information_baseline(spectrum, P),
        check_v2(spectrum, P),
        check_fidelity_sum(spectrum, P),
    ]
    records.extend(check_renyi(spectrum, P, alphas))
    notes = (
        "Conditions are necessary only; a passing report does not certify generability.",
        "Sum-of-squares bounds take r as the seed's Schmidt rank, which may exceed the PSD-rank of the target.",
    )
    return ConditionReport(tuple(records), notes)
