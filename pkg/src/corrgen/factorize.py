"""Alternating optimization for diagonal-form PSD factorizations.

A diagonal-form factorization of a correlation P is a family of PSD
matrices {C_x}, {D_y} with P(x,y) = tr(C_x D_y) and ΣC_x = ΣD_y = Λ for
a diagonal nonnegative Λ.  Finding one for a prescribed Λ is a
non-convex (NP-hard) problem; the solver below alternates between the
two convex subproblems (fix {D_y}, solve for {C_x}, and vice versa),
with multiple deterministic restarts.

Each subproblem is a small dense convex QP over the intersection of the
per-matrix PSD cones with the affine slice ΣC_x = Λ.  It is solved by
projected gradient descent; the projection onto the intersection is
computed with Dykstra's alternating-projection scheme.  A failed search
means "no factorization found", never "infeasible".

Real symmetric matrices only.  Complex Hermitian factors could in
principle exist where real ones do not; this is a documented limitation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np


class FactorizationError(ValueError):
    """Raised for structurally invalid factorizations or solver inputs."""


def _as_sqrt_lambda(lam, squared: bool = False) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    if lam.ndim == 2:
        if np.max(np.abs(lam - np.diag(np.diag(lam)))) > 0:
            raise FactorizationError("Lambda must be diagonal")
        lam = np.diag(lam)
    if lam.ndim != 1 or lam.size == 0:
        raise FactorizationError("Lambda must be a non-empty diagonal")
    if np.any(lam < 0):
        raise FactorizationError("Lambda entries must be nonnegative")
    return np.sqrt(lam) if squared else lam.copy()


@dataclass(frozen=True)
class DiagonalPsdFactorization:
    """PSD factor families {C_x}, {D_y} with common diagonal factor sum Λ.

    ``lam`` holds the diagonal of Λ, i.e. the √λ entries — squared
    values are only exposed through :meth:`squared_lambdas` to keep the
    λ-vs-√λ convention in one place.
    """

    C: np.ndarray          # (n, k, k)
    D: np.ndarray          # (m, k, k)
    lam: np.ndarray        # (k,), entries √λ_i

    def __init__(self, C, D, lam, lam_squared: bool = False) -> None:
        C = np.array(C, dtype=float)
        D = np.array(D, dtype=float)
        lam = _as_sqrt_lambda(lam, squared=lam_squared)
        k = lam.size
        if C.ndim != 3 or D.ndim != 3 or C.shape[1:] != (k, k) or D.shape[1:] != (k, k):
            raise FactorizationError("factor stacks must have shape (count, k, k)")
        for a in (C, D, lam):
            a.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "lam", lam)

    @property
    def k(self) -> int:
        return self.lam.size

    def squared_lambdas(self) -> np.ndarray:
        """The squared Schmidt coefficients λ_i = (Λ entries)²."""
        return self.lam ** 2

    def trace_table(self) -> np.ndarray:
        """The induced cell table tr(C_x D_y)."""
        return np.einsum("xab,yba->xy", self.C, self.D)

    def max_negative_eigenvalue(self) -> float:
        worst = 0.0
        for stack in (self.C, self.D):
            for mat in stack:
                ev = np.linalg.eigvalsh(0.5 * (mat + mat.T))
                worst = min(worst, float(ev[0]))
        return -worst

    def feasibility_error(self) -> float:
        """Max deviation of the factor sums from Λ plus PSD violation."""
        lam_diag = np.diag(self.lam)
        dev_c = np.max(np.abs(self.C.sum(axis=0) - lam_diag))
        dev_d = np.max(np.abs(self.D.sum(axis=0) - lam_diag))
        return float(max(dev_c, dev_d, self.max_negative_eigenvalue()))

    def validate(self, psd_tol: float = 1e-8, sum_tol: float = 1e-8,
                 cell_tol: float = 1e-10) -> None:
        if self.max_negative_eigenvalue() > psd_tol:
            raise FactorizationError("factor matrices are not PSD within tolerance")
        lam_diag = np.diag(self.lam)
        if np.max(np.abs(self.C.sum(axis=0) - lam_diag)) > sum_tol:
            raise FactorizationError("sum of C factors differs from Lambda")
        if np.max(np.abs(self.D.sum(axis=0) - lam_diag)) > sum_tol:
            raise FactorizationError("sum of D factors differs from Lambda")
        if np.min(self.trace_table()) < -cell_tol:
            raise FactorizationError("negative cell trace beyond tolerance")

    def to_json_dict(self, objective: float | None = None) -> dict:
        d = {"lambda": self.lam.tolist(), "C": self.C.tolist(), "D": self.D.tolist()}
        if objective is not None:
            d["objective"] = objective
        return d

    @classmethod
    def from_json_dict(cls, data: dict) -> "DiagonalPsdFactorization":
        try:
            return cls(data["C"], data["D"], data["lambda"])
        except KeyError as exc:
            raise FactorizationError(f"factorization JSON missing key {exc}") from exc


@dataclass(frozen=True)
class SolveSettings:
    max_outer_iters: int = 500
    residual_tol: float = 1e-9
    stall_tol: float = 1e-12
    stall_window: int = 10
    restarts: int = 10
    rng_seed: int = 12345
    max_inner_iters: int = 250
    feasibility_tol: float = 1e-8
    stationarity_tol: float = 1e-10
    max_backtracks: int = 40

    def __post_init__(self):
        if min(self.max_outer_iters, self.restarts, self.max_inner_iters,
               self.stall_window) < 1:
            raise FactorizationError("iteration counts must be >= 1")
        if min(self.residual_tol, self.stall_tol, self.feasibility_tol,
               self.stationarity_tol) <= 0:
            raise FactorizationError("tolerances must be positive")


@dataclass(frozen=True)
class SolveOutcome:
    factorization: DiagonalPsdFactorization
    objective: float
    iterations: int
    restart_index: int
    converged: bool
    objective_history: tuple[float, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class VerifyResult:
    residual: float
    feasibility: float
    ok: bool

    def to_json_dict(self) -> dict:
        return {"residual": self.residual, "feasibility": self.feasibility, "ok": self.ok}


def init_factors(rng_seed: int, k: int, count: int, dim_hint: int | None = None) -> np.ndarray:
    """Random PSD starting factors: each is Σᵢ bᵢbᵢᵀ over k standard-normal vectors."""
    if k < 1 or count < 1:
        raise FactorizationError("k and count must be >= 1")
    dim = dim_hint or k
    rng = np.random.default_rng(rng_seed)
    out = np.empty((count, dim, dim))
    for c in range(count):
        b = rng.standard_normal((k, dim))
        out[c] = b.T @ b
    return out


def _project_psd(stack: np.ndarray) -> np.ndarray:
    sym = 0.5 * (stack + stack.transpose(0, 2, 1))
    k = sym.shape[-1]
    if k == 1:
        return np.maximum(sym, 0.0)
    if k == 2:
        # closed-form eigenprojection, avoids LAPACK per-call overhead
        a, b, c = sym[:, 0, 0], sym[:, 0, 1], sym[:, 1, 1]
        mean = 0.5 * (a + c)
        rad = np.sqrt((0.5 * (a - c)) ** 2 + b ** 2)
        lo = np.maximum(mean - rad, 0.0)
        hi = np.maximum(mean + rad, 0.0)
        # eigenvector for the larger eigenvalue; diagonal case picks the larger entry
        off = np.abs(b) > 1e-300
        ux = np.where(off, b, np.where(a >= c, 1.0, 0.0))
        uy = np.where(off, mean + rad - a, np.where(a >= c, 0.0, 1.0))
        nrm = np.sqrt(ux ** 2 + uy ** 2)
        ux, uy = ux / nrm, uy / nrm
        out = np.empty_like(sym)
        out[:, 0, 0] = hi * ux ** 2 + lo * uy ** 2
        out[:, 0, 1] = out[:, 1, 0] = (hi - lo) * ux * uy
        out[:, 1, 1] = hi * uy ** 2 + lo * ux ** 2
        return out
    # batched eigendecomposition with negative eigenvalues clamped to 0
    vals, vecs = np.linalg.eigh(sym)
    vals = np.maximum(vals, 0.0)
    return np.einsum("xab,xb,xcb->xac", vecs, vals, vecs)


def _project_affine(stack: np.ndarray, lam_diag: np.ndarray) -> np.ndarray:
    # shift every matrix by the same amount so the stack sums to Λ
    return stack - (stack.sum(axis=0) - lam_diag) / stack.shape[0]


def project_feasible(stack: np.ndarray, lam: np.ndarray,
                     tol: float = 1e-11, max_iters: int = 100) -> np.ndarray:
    """Dykstra projection onto {each matrix PSD} ∩ {stack sums to diag(lam)}.

    Ends on the affine step, so the sum constraint holds to machine
    precision; any residual PSD violation is within the iteration
    tolerance.
    """
    lam_diag = np.diag(lam)
    x = _project_affine(stack, lam_diag)
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    for _ in range(max_iters):
        y = _project_psd(x + p)
        p = x + p - y
        x_new = _project_affine(y + q, lam_diag)
        q = y + q - x_new
        if np.max(np.abs(x_new - x)) < tol:
            return x_new
        x = x_new
    return x


def _objective(P: np.ndarray, C: np.ndarray, D: np.ndarray) -> float:
    table = np.einsum("xab,yba->xy", C, D)
    return float(np.sum((P - table) ** 2))


def solve_subproblem(P: np.ndarray, fixed: np.ndarray, lam,
                     settings: SolveSettings | None = None,
                     init: np.ndarray | None = None) -> np.ndarray:
    """Minimize Σ(P(x,y) − tr(C_x D_y))² over feasible {C_x}, {D_y} fixed.

    Projected gradient with step 1/L, L = 2·Σ‖D_y‖_F², halving on any
    objective increase; a monotone descent method.  ``P`` is the raw
    cell table as an array (pass Pᵀ with the C stack to solve for D).
    """
    settings = settings or SolveSettings()
    P = np.asarray(P, dtype=float)
    D = np.asarray(fixed, dtype=float)
    lam = _as_sqrt_lambda(lam)
    k = lam.size
    n = P.shape[0]
    if P.shape[1] != D.shape[0] or D.shape[1:] != (k, k):
        raise FactorizationError("subproblem shapes are inconsistent")

    default = np.stack([np.diag(lam) / n] * n)
    L = 2.0 * float(np.sum(D ** 2))
    if L <= 0:
        # objective is constant; return the feasible default
        return init.copy() if init is not None else default
    if init is None:
        C = default
    else:
        # a feasible init (e.g. the previous outer iterate, itself a
        # Dykstra output) is kept as is: re-projecting can nudge the
        # objective upward and break outer-loop monotonicity
        C = init.copy()
        if np.max(np.abs(C.sum(axis=0) - np.diag(lam))) > 1e-12:
            C = project_feasible(C, lam)

    f = _objective(P, C, D)
    base_step = 1.0 / L
    prev_C = prev_grad = None
    for _ in range(settings.max_inner_iters):
        table = np.einsum("xab,yba->xy", C, D)
        grad = -2.0 * np.einsum("xy,yab->xab", P - table, D)
        # symmetrize to cancel floating-point asymmetry
        grad = 0.5 * (grad + grad.transpose(0, 2, 1))

        # Barzilai-Borwein trial step, safeguarded by monotone backtracking
        step = base_step
        if prev_C is not None:
            s = C - prev_C
            g = grad - prev_grad
            denom = float(np.sum(s * g))
            if denom > 0:
                step = max(float(np.sum(s * s)) / denom, base_step)
        prev_C, prev_grad = C, grad

        accepted = False
        for _ in range(settings.max_backtracks):
            trial = project_feasible(C - step * grad, lam)
            f_trial = _objective(P, trial, D)
            if f_trial <= f:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        move = np.max(np.abs(trial - C))
        C, f = trial, f_trial
        if move <= settings.stationarity_tol:
            break
    return C


def alternate(P, lam, k: int, settings: SolveSettings | None = None,
              lam_squared: bool = False) -> SolveOutcome:
    """Multi-restart alternating optimization for a diagonal-form factorization.

    Runs the two convex subproblems in turn until the objective drops
    below ``residual_tol``, stalls, or hits the iteration cap; the best
    restart wins (ties broken by lower restart index).  An infeasible Λ
    is not an error — it simply yields a high residual and
    ``converged=False``.
    """
    from .correlation import Correlation

    settings = settings or SolveSettings()
    if isinstance(P, Correlation):
        P = P.matrix
    P = np.asarray(P, dtype=float)
    lam = _as_sqrt_lambda(lam, squared=lam_squared)
    if k != lam.size:
        raise FactorizationError("k must equal the number of Lambda entries")
    n, m = P.shape

    best = None
    for restart in range(settings.restarts):
        D = init_factors(settings.rng_seed + restart, k, m)
        C = None
        history = []
        converged = False
        for it in range(settings.max_outer_iters):
            C = solve_subproblem(P, D, lam, settings, init=C)
            D = solve_subproblem(P.T, C, lam, settings, init=D)
            obj = _objective(P, C, D)
            history.append(obj)
            if obj <= settings.residual_tol:
                converged = True
                break
            w = settings.stall_window
            if len(history) > w:
                drop = history[-w - 1] - history[-1]
                if drop < settings.stall_tol * max(history[-w - 1], 1e-30):
                    break
        outcome = SolveOutcome(
            factorization=DiagonalPsdFactorization(C, D, lam),
            objective=history[-1],
            iterations=len(history),
            restart_index=restart,
            converged=converged,
            objective_history=tuple(history),
        )
        if best is None or outcome.objective < best.objective:
            best = outcome
        if best.converged:
            break
    return best


def verify(P, F: DiagonalPsdFactorization, tol: float = 1e-6) -> VerifyResult:
    """Check a candidate factorization against P cell by cell.

    ``residual`` is the max cell error |P(x,y) − tr(C_x D_y)|;
    ``feasibility`` covers the factor-sum deviation from Λ and any
    negative eigenvalues.
    """
    from .correlation import Correlation

    if isinstance(P, Correlation):
        P = P.matrix
    P = np.asarray(P, dtype=float)
    if P.shape != (F.C.shape[0], F.D.shape[0]):
        raise FactorizationError("factorization shape does not match the correlation")
    residual = float(np.max(np.abs(P - F.trace_table())))
    feasibility = F.feasibility_error()
    return VerifyResult(residual, feasibility, residual <= tol and feasibility <= tol)


def lambda_candidates_from_purifications(P) -> list[np.ndarray]:
    """Λ candidates (√λ entry vectors, sorted descending) from named purifications.

    (a) the canonical purification, whose Schmidt coefficients are the
    singular values of the entrywise square root of P; (b) for 2×2
    supports, the CNOT-twisted purification.
    """
    from .purify import canonical_purification, cnot_purification

    candidates = []
    state = canonical_purification(P)
    sv = np.linalg.svd(state.amplitudes, compute_uv=False)
    candidates.append(np.sort(sv[sv > 1e-12])[::-1])
    if P.matrix.shape == (2, 2):
        sv = np.linalg.svd(cnot_purification(P).amplitudes, compute_uv=False)
        candidates.append(np.sort(sv[sv > 1e-12])[::-1])
    return candidates
