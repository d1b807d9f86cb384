"""Classical-seed pipeline: channel extraction, the A P₁ Bᵀ feasibility
search, and the SUBSET-SUM reduction builders with an exact oracle.

Quantum local operations give no extra reachability when both seed and
target are classical, so the search below is over pairs of
column-stochastic matrices only.  The search is a heuristic; a failed
search is not an infeasibility proof.  Exact decisions are available
precisely where the reduction proofs give structure: a diagonal seed
against the half-identity target reduces to SUBSET-SUM, which the
oracle settles in exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .conditions import SchmidtSpectrum
from .correlation import Correlation
from .factorize import DiagonalPsdFactorization, FactorizationError, SolveSettings


class ClassicalError(ValueError):
    pass


class InstanceTooLarge(ClassicalError):
    pass


MAX_ORACLE_ITEMS = 50


@dataclass(frozen=True)
class StochasticTransformPair:
    """Column-stochastic matrices (A, B) witnessing P₂ ≈ A P₁ Bᵀ."""

    A: np.ndarray
    B: np.ndarray

    def __init__(self, A, B) -> None:
        A = np.array(A, dtype=float)
        B = np.array(B, dtype=float)
        for name, mat in (("A", A), ("B", B)):
            if mat.ndim != 2:
                raise ClassicalError(f"{name} must be a matrix")
            if np.min(mat) < -1e-12:
                raise ClassicalError(f"{name} has negative entries")
            if np.max(np.abs(mat.sum(axis=0) - 1.0)) > 1e-10:
                raise ClassicalError(f"columns of {name} must sum to 1")
        A = np.clip(A, 0.0, None)
        B = np.clip(B, 0.0, None)
        A.setflags(write=False)
        B.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    def apply(self, P1: Correlation) -> np.ndarray:
        return self.A @ P1.matrix @ self.B.T

    def to_json_dict(self) -> dict:
        return {"A": self.A.tolist(), "B": self.B.tolist()}


@dataclass(frozen=True)
class SubsetSumInstance:
    """Positive integers a₁…a_r with implicit target T = Σaᵢ/2."""

    items: tuple[int, ...]

    def __init__(self, items) -> None:
        items = tuple(int(a) for a in items)
        if not items or any(a < 1 for a in items):
            raise ClassicalError("items must be positive integers")
        object.__setattr__(self, "items", items)

    @property
    def total(self) -> int:
        return sum(self.items)

    def to_json_dict(self) -> dict:
        return {"items": list(self.items)}


@dataclass(frozen=True)
class OracleResult:
    satisfiable: bool
    witness: tuple[int, ...]  # indices into items; empty when unsatisfiable


def subset_sum_oracle(inst: SubsetSumInstance) -> OracleResult:
    """Exact half-sum decision with witness, by bitset dynamic programming.

    Reachable sums are tracked as bits of a Python integer; the witness
    is reconstructed by peeling items off the prefix tables.  Exact
    integer arithmetic throughout.  An odd total is immediately
    unsatisfiable.
    """
    r = len(inst.items)
    if r > MAX_ORACLE_ITEMS:
        raise InstanceTooLarge(f"oracle is desk-scale only (r <= {MAX_ORACLE_ITEMS})")
    total = inst.total
    if total % 2 == 1:
        return OracleResult(False, ())
    target = total // 2

    prefix = [1]  # prefix[i] = bitset of sums over items[:i]
    reach = 1
    for a in inst.items:
        reach |= reach << a
        prefix.append(reach)
    if not (reach >> target) & 1:
        return OracleResult(False, ())

    witness = []
    remaining = target
    for i in range(r - 1, -1, -1):
        a = inst.items[i]
        # take item i iff the rest of the sum is reachable without it
        if remaining >= a and (prefix[i] >> (remaining - a)) & 1:
            witness.append(i)
            remaining -= a
        # else remaining must be reachable in prefix[i] already
    assert remaining == 0
    return OracleResult(True, tuple(sorted(witness)))


@dataclass(frozen=True)
class QuantumHardnessInstance:
    spectrum: SchmidtSpectrum
    target: Correlation
    exact_lambdas: tuple[Fraction, ...]   # aligned with the sorted spectrum
    item_order: tuple[int, ...]           # spectrum position -> original item index


@dataclass(frozen=True)
class ClassicalHardnessInstance:
    seed: Correlation
    target: Correlation
    exact_lambdas: tuple[Fraction, ...]   # aligned with the seed diagonal


def _half_identity() -> Correlation:
    return Correlation([[0.5, 0.0], [0.0, 0.5]])


def build_quantum_hardness_instance(inst: SubsetSumInstance) -> QuantumHardnessInstance:
    """Seed spectrum λᵢ = aᵢ/Σa (sorted descending) and target ½I₂."""
    total = inst.total
    order = sorted(range(len(inst.items)), key=lambda i: inst.items[i], reverse=True)
    fracs = tuple(Fraction(inst.items[i], total) for i in order)
    lam = np.array([float(f) for f in fracs])
    return QuantumHardnessInstance(SchmidtSpectrum(lam), _half_identity(), fracs,
                                   tuple(order))


def build_classical_hardness_instance(inst: SubsetSumInstance) -> ClassicalHardnessInstance:
    """Diagonal seed diag(λ₁…λ_r) and target ½I₂."""
    total = inst.total
    fracs = tuple(Fraction(a, total) for a in inst.items)
    seed = Correlation(np.diag([float(f) for f in fracs]))
    return ClassicalHardnessInstance(seed, _half_identity(), fracs)


def schmidt_basis_protocol(spectrum: SchmidtSpectrum, subset) -> DiagonalPsdFactorization:
    """Measure in the Schmidt basis and group outcomes by subset membership.

    Yields the diagonal-form factorization of ½I₂ with Λ = diag(√λ):
    C₁ = D₁ the √λ diagonal restricted to the subset, C₂ = D₂ the
    complement.  The subset must carry mass 1/2.
    """
    subset = sorted(set(int(i) for i in subset))
    r = spectrum.rank
    if any(i < 0 or i >= r for i in subset):
        raise ClassicalError("subset indices out of range")
    mass = float(np.sum(spectrum.lambdas[subset])) if subset else 0.0
    if abs(mass - 0.5) > 1e-10:
        raise ClassicalError(f"subset mass must be 1/2, got {mass}")
    sel = np.zeros(r)
    sel[subset] = 1.0
    sq = spectrum.sqrt_lambdas()
    block1 = np.diag(sq * sel)
    block2 = np.diag(sq * (1.0 - sel))
    C = np.stack([block1, block2])
    return DiagonalPsdFactorization(C, C.copy(), sq)


def kraus_to_stochastic(kraus) -> np.ndarray:
    """Classical channel induced by a quantum channel in the label basis.

    Entry (x', x) is Σᵢ|⟨x'|Eᵢ|x⟩|²; trace preservation of the Kraus set
    makes the result column-stochastic.
    """
    mats = [np.asarray(E, dtype=complex) for E in kraus]
    if not mats:
        raise ClassicalError("empty Kraus set")
    d = mats[0].shape[1]
    comp = sum(E.conj().T @ E for E in mats)
    if np.max(np.abs(comp - np.eye(d))) > 1e-8:
        raise ClassicalError("Kraus set is not trace preserving")
    return np.sum([np.abs(E) ** 2 for E in mats], axis=0)


def _project_columns_simplex(M: np.ndarray) -> np.ndarray:
    """Euclidean projection of every column onto the probability simplex.

    Standard sorted-threshold algorithm, vectorized over columns.
    """
    k, n = M.shape
    s = np.sort(M, axis=0)[::-1]
    cums = np.cumsum(s, axis=0) - 1.0
    idx = np.arange(1, k + 1)[:, None]
    cond = s - cums / idx > 0
    rho = k - np.argmax(cond[::-1], axis=0) - 1   # last True per column
    theta = cums[rho, np.arange(n)] / (rho + 1.0)
    return np.maximum(M - theta, 0.0)


@dataclass(frozen=True)
class ClassicalSearchResult:
    pair: StochasticTransformPair
    residual: float           # squared Frobenius error ‖P₂ − A P₁ Bᵀ‖²
    converged: bool
    residual_history: tuple[float, ...] = ()


def _pgd_stochastic(target: np.ndarray, M: np.ndarray, A: np.ndarray,
                    settings: SolveSettings) -> np.ndarray:
    """Minimize ‖target − A·M‖² over column-stochastic A, monotone PGD."""
    L = 2.0 * float(np.sum(M ** 2))
    if L <= 0:
        return A
    f = float(np.sum((target - A @ M) ** 2))
    base_step = 1.0 / L
    for _ in range(settings.max_inner_iters):
        grad = -2.0 * (target - A @ M) @ M.T
        step = base_step
        accepted = False
        for _ in range(settings.max_backtracks):
            trial = _project_columns_simplex(A - step * grad)
            f_trial = float(np.sum((target - trial @ M) ** 2))
            if f_trial <= f:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        move = np.max(np.abs(trial - A))
        A, f = trial, f_trial
        if move <= settings.stationarity_tol:
            break
    return A


def classical_feasible_search(P1: Correlation, P2: Correlation,
                              settings: SolveSettings | None = None) -> ClassicalSearchResult:
    """Alternating least squares for P₂ ≈ A P₁ Bᵀ over stochastic A, B.

    Multi-restart; each half-iteration solves a convex problem and never
    increases the residual.  Non-convergence is reported, not thrown,
    and does not certify infeasibility.
    """
    settings = settings or SolveSettings()
    n2, m2 = P2.matrix.shape
    n1, m1 = P1.matrix.shape

    best = None
    for restart in range(settings.restarts):
        rng = np.random.default_rng(settings.rng_seed + restart)
        A = _project_columns_simplex(rng.random((n2, n1)))
        B = _project_columns_simplex(rng.random((m2, m1)))
        history = []
        converged = False
        for _ in range(settings.max_outer_iters):
            A = _pgd_stochastic(P2.matrix, P1.matrix @ B.T, A, settings)
            B = _pgd_stochastic(P2.matrix.T, P1.matrix.T @ A.T, B, settings)
            res = float(np.sum((P2.matrix - A @ P1.matrix @ B.T) ** 2))
            history.append(res)
            if res <= settings.residual_tol:
                converged = True
                break
            w = settings.stall_window
            if len(history) > w and history[-w - 1] - history[-1] < settings.stall_tol * max(history[-w - 1], 1e-30):
                break
        result = ClassicalSearchResult(StochasticTransformPair(A, B), history[-1],
                                       converged, tuple(history))
        if best is None or result.residual < best.residual:
            best = result
        if best.converged:
            break
    return best


def is_diag_to_half_identity(P1: Correlation, P2: Correlation, tol: float = 1e-12) -> bool:
    """Whether (P1, P2) is a diagonal-seed → ½I₂ instance with exact decision."""
    off = P1.matrix - np.diag(np.diag(P1.matrix))
    if P1.n != P1.m or np.max(np.abs(off)) > tol:
        return False
    return P2.matrix.shape == (2, 2) and np.max(np.abs(P2.matrix - _half_identity().matrix)) <= tol


def decide_diag_to_half_identity(P1: Correlation) -> OracleResult:
    """Exact feasibility of diag(λ) → ½I₂ by the forced-binary structure.

    Any stochastic witness pair is forced to 0/1 entries, so feasibility
    is exactly the existence of a diagonal subset of mass 1/2; decided
    in exact rational arithmetic via the SUBSET-SUM oracle.
    """
    diag = np.diag(P1.matrix)
    fracs = [Fraction(x).limit_denominator(10 ** 12) for x in diag]
    if any(abs(float(f) - x) > 1e-12 for f, x in zip(fracs, diag)):
        raise ClassicalError("seed diagonal is not recognizably rational")
    return _decide_half_split(fracs)


def _decide_half_split(fracs) -> OracleResult:
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // int(np.gcd(denom, f.denominator))
    items = [int(f * denom) for f in fracs]
    # zero-mass labels cannot contribute to either group
    keep = [(i, a) for i, a in enumerate(items) if a > 0]
    res = subset_sum_oracle(SubsetSumInstance([a for _, a in keep]))
    if not res.satisfiable:
        return res
    return OracleResult(True, tuple(keep[j][0] for j in res.witness))


def decide_classical_hardness_instance(inst: ClassicalHardnessInstance) -> OracleResult:
    """Exact feasibility of a built diag(λ) → ½I₂ instance.

    Uses the exact rational λ recorded at build time, so no float
    recovery step is involved.
    """
    return _decide_half_split(inst.exact_lambdas)
