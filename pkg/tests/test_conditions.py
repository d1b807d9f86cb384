import numpy as np
import pytest

from corrgen import (
    Correlation,
    NOT_RULED_OUT,
    RULED_OUT,
    SchmidtSpectrum,
    check_all,
    check_fidelity_sum,
    check_holevo,
    check_min_schmidt,
    check_renyi,
    check_v2,
    v2_classical,
)
from corrgen.conditions import SpectrumError, mutual_information_baseline

from conftest import random_correlation

BELL = SchmidtSpectrum([0.5, 0.5])
DIAG37 = Correlation([[0.3, 0.0], [0.0, 0.7]])
EX2 = Correlation(np.array([[1, 4], [4, 0]]) / 9)
EX3 = Correlation(np.array([[2, 6], [3, 0]]) / 11)
EX5 = Correlation(np.array([[4, 1, 1], [1, 1, 0], [1, 0, 1]]) / 10)
ALG = Correlation(np.array([[1, 1], [1, 0]]) / 3)
PRODUCT = Correlation(np.outer([0.4, 0.6], [0.3, 0.7]))


class TestSpectrum:
    def test_sorts_descending(self):
        s = SchmidtSpectrum([0.1, 0.9])
        np.testing.assert_allclose(s.lambdas, [0.9, 0.1])

    @pytest.mark.parametrize("bad", [[0.5, 0.6], [1.0, 0.0], [-0.5, 1.5], []])
    def test_rejects_invalid(self, bad):
        with pytest.raises(SpectrumError):
            SchmidtSpectrum(bad)

    def test_sqrt_accessor(self):
        np.testing.assert_allclose(SchmidtSpectrum([0.64, 0.36]).sqrt_lambdas(), [0.8, 0.6])


class TestRenyi:
    def test_example1_alpha_inf(self):
        (rec,) = check_renyi(BELL, DIAG37, alphas=[float("inf")])
        assert rec.lhs == pytest.approx(4.0)
        assert rec.rhs == pytest.approx(1 / 0.3)
        assert rec.satisfied

    def test_product_target_always_passes(self):
        for alpha in (0.5, 0.75, 2.0, 3.0, float("inf")):
            for spec in (BELL, SchmidtSpectrum([0.9, 0.1]), SchmidtSpectrum([1.0])):
                (rec,) = check_renyi(spec, PRODUCT, alphas=[alpha])
                assert rec.satisfied, (alpha, spec)

    def test_rank_one_seed_vs_correlated_target(self):
        (rec,) = check_renyi(SchmidtSpectrum([1.0]), Correlation([[0.5, 0], [0, 0.5]]),
                             alphas=[2.0])
        assert rec.lhs == pytest.approx(1.0)
        assert rec.rhs == pytest.approx(2.0)
        assert not rec.satisfied

    @pytest.mark.parametrize("alpha", [1.0, 0.3, 0.0, -2.0])
    def test_rejects_bad_alpha(self, alpha):
        with pytest.raises(SpectrumError):
            check_renyi(BELL, DIAG37, alphas=[alpha])


class TestMinSchmidt:
    def test_example1(self):
        rec = check_min_schmidt(BELL, DIAG37)
        assert rec.rhs == pytest.approx(0.3, abs=1e-12)
        assert not rec.satisfied

    def test_example5(self):
        rec = check_min_schmidt(BELL, EX5)
        assert rec.rhs == pytest.approx(0.4, abs=1e-12)
        assert not rec.satisfied

    def test_example2_passes(self):
        assert check_min_schmidt(SchmidtSpectrum([8 / 9, 1 / 9]), EX2).satisfied


class TestHolevo:
    def test_example2_violated(self):
        rec = check_holevo(SchmidtSpectrum([8 / 9, 1 / 9]), EX2)
        assert rec.lhs == pytest.approx(0.59, abs=0.005)
        assert rec.rhs == pytest.approx(0.5033, abs=5e-4)
        assert not rec.satisfied

    def test_bell_perfect_bit_boundary(self):
        rec = check_holevo(BELL, Correlation([[0.5, 0], [0, 0.5]]))
        assert rec.lhs == pytest.approx(1.0)
        assert rec.rhs == pytest.approx(1.0)
        assert rec.satisfied

    def test_rank_one_seed(self):
        rec = check_holevo(SchmidtSpectrum([1.0]), EX2)
        assert rec.rhs == 0.0
        assert not rec.satisfied


class TestV2:
    def test_example3_value(self):
        assert 1 - v2_classical(EX3) ** 2 / 2 == pytest.approx(0.7769, abs=5e-4)

    def test_product_zero(self):
        assert v2_classical(PRODUCT) == pytest.approx(0.0, abs=1e-12)

    def test_perfect_bit(self):
        assert v2_classical(Correlation([[0.5, 0], [0, 0.5]])) == pytest.approx(1.0)

    def test_example3_violated(self):
        rec = check_v2(SchmidtSpectrum([0.9, 0.1]), EX3)
        assert rec.lhs == pytest.approx(0.82, abs=1e-12)
        assert not rec.satisfied

    def test_example4_passes(self):
        rec = check_v2(SchmidtSpectrum([21 / 25, 4 / 25]), EX3)
        assert rec.lhs == pytest.approx(457 / 625, abs=1e-12)
        assert rec.satisfied

    def test_rank_one_product_boundary(self):
        assert check_v2(SchmidtSpectrum([1.0]), PRODUCT).satisfied


class TestFidelitySum:
    def test_example4_violated(self):
        rec = check_fidelity_sum(SchmidtSpectrum([21 / 25, 4 / 25]), EX3)
        assert rec.lhs == pytest.approx(85 / 121, abs=1e-9)
        assert rec.rhs == pytest.approx(457 / 625, abs=1e-12)
        assert not rec.satisfied

    def test_example5_passes(self):
        rec = check_fidelity_sum(BELL, EX5)
        assert rec.lhs == pytest.approx(0.82, abs=1e-9)
        assert rec.satisfied

    def test_perfect_bit_boundary(self):
        rec = check_fidelity_sum(BELL, Correlation([[0.5, 0], [0, 0.5]]))
        assert rec.lhs == pytest.approx(0.5)
        assert rec.rhs == pytest.approx(0.5)
        assert rec.satisfied


class TestCheckAll:
    def test_example1_ruled_out_by_min_schmidt(self):
        report = check_all(BELL, DIAG37)
        assert report.verdict == RULED_OUT
        assert not report.record("min_schmidt").satisfied
        assert report.record("holevo").satisfied
        for rec in report.records:
            if rec.name == "renyi":
                assert rec.satisfied

    def test_algorithm_example_not_ruled_out(self):
        assert check_all(SchmidtSpectrum([0.8, 0.2]), ALG).verdict == NOT_RULED_OUT

    def test_product_not_ruled_out(self):
        assert check_all(SchmidtSpectrum([1.0]), PRODUCT).verdict == NOT_RULED_OUT

    def test_report_json_shape(self):
        data = check_all(BELL, DIAG37).to_json_dict()
        assert data["verdict"] == RULED_OUT
        assert {"name", "lhs", "rhs", "satisfied"} <= set(data["conditions"][0])
        inf_records = [c for c in data["conditions"] if c.get("alpha") == "inf"]
        assert len(inf_records) == 1


class TestImplications:
    def test_alpha_inf_weaker_than_min_schmidt(self, rng):
        for _ in range(200):
            n, m, r = rng.integers(2, 5), rng.integers(2, 5), rng.integers(1, 5)
            P = random_correlation(rng, n, m)
            lam = rng.dirichlet(np.ones(r))
            if lam.min() <= 1e-9:
                continue
            spec = SchmidtSpectrum(lam)
            if check_min_schmidt(spec, P).satisfied:
                (rec,) = check_renyi(spec, P, alphas=[float("inf")])
                assert rec.satisfied

    def test_holevo_implies_doubled_baseline(self, rng):
        for _ in range(200):
            P = random_correlation(rng, 3, 3)
            lam = rng.dirichlet(np.ones(3))
            if lam.min() <= 1e-9:
                continue
            spec = SchmidtSpectrum(lam)
            if check_holevo(spec, P).satisfied:
                assert mutual_information_baseline(spec, P).satisfied

    def test_product_targets_pass_everything(self, rng):
        for _ in range(50):
            p = rng.dirichlet(np.ones(3))
            q = rng.dirichlet(np.ones(3))
            P = Correlation(np.outer(p, q))
            lam = rng.dirichlet(np.ones(rng.integers(1, 4)))
            if lam.min() <= 1e-9:
                continue
            assert check_all(SchmidtSpectrum(lam), P).verdict == NOT_RULED_OUT

    def test_min_schmidt_permutation_invariant(self, rng):
        P = random_correlation(rng, 3, 4)
        perm = Correlation(P.matrix[rng.permutation(3)][:, rng.permutation(4)])
        a = check_min_schmidt(BELL, P)
        b = check_min_schmidt(BELL, perm)
        assert a.rhs == pytest.approx(b.rhs, abs=1e-14)
