import sys

import numpy as np
import pytest

from corrgen import Correlation, DiagonalPsdFactorization


def random_correlation(rng, n, m):
    return Correlation(rng.dirichlet(np.ones(n * m)).reshape(n, m))


def random_verified_factorization(rng, n, m, k):
    """Random diagonal-form factorization built from a random purification.

    Orthonormal column families scaled to norm λ_i^{1/4} give factor
    stacks whose sums are exactly diag(√λ), and the induced cell table
    is automatically a valid correlation.  Independent of the solver.
    """
    while True:
        lam_sq = rng.dirichlet(np.ones(k))
        if lam_sq.min() > 1e-4:
            break

    def family(count):
        mat = rng.standard_normal((count * k, k))
        q, _ = np.linalg.qr(mat)
        q = q * lam_sq ** 0.25
        vec = q.reshape(count, k, k).transpose(0, 2, 1)  # [label, schmidt, component]
        return np.einsum("xia,xja->xij", vec, vec)

    C = family(n)
    D = family(m)
    F = DiagonalPsdFactorization(C, D, np.sqrt(lam_sq))
    P = Correlation(F.trace_table())
    return F, P


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
