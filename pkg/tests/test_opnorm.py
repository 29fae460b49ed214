"""Tests for discrete weighted-Lebesgue operator norms."""

import numpy as np
import pytest

from grushin.errors import DomainError
from grushin.lab.opnorm import OpNormResult, op_norm

CELL = 0.125


class TestExactColumnNorms:
    def test_rank_one_into_l2(self):
        # A f = <f, u> v has exact 1 -> 2 norm max|u| * ||v||_2
        rng = np.random.default_rng(3)
        u = rng.standard_normal(50)
        v = rng.standard_normal(50)
        apply = lambda f: (f * u).sum() * CELL * v
        res = op_norm(apply, (50,), CELL, 1.0, 2.0)
        want = np.abs(u).max() * np.sqrt((v ** 2).sum() * CELL)
        assert res.certificate == "exact"
        assert res.converged
        assert res.value == pytest.approx(want, rel=1e-12)

    def test_rank_one_into_l1(self):
        rng = np.random.default_rng(3)
        u = rng.standard_normal(50)
        v = rng.standard_normal(50)
        apply = lambda f: (f * u).sum() * CELL * v
        res = op_norm(apply, (50,), CELL, 1.0, 1.0)
        want = np.abs(u).max() * np.abs(v).sum() * CELL
        assert res.value == pytest.approx(want, rel=1e-12)

    def test_multidimensional_shape(self):
        diag = np.arange(24, dtype=float).reshape(2, 3, 4) - 7.0
        apply = lambda f: diag * f
        res = op_norm(apply, (2, 3, 4), CELL, 1.0, 1.0)
        # diagonal operator: column j has L1 norm |diag_j|
        assert res.value == pytest.approx(np.abs(diag).max(), rel=1e-12)

    def test_candidate_subset_is_dominated(self):
        rng = np.random.default_rng(9)
        mat = rng.standard_normal((30, 30))
        apply = lambda f: mat @ f
        full = op_norm(apply, (30,), CELL, 1.0, 2.0)
        part = op_norm(apply, (30,), CELL, 1.0, 2.0, candidates=[0, 5, 7])
        assert part.value <= full.value + 1e-15
        with pytest.raises(DomainError):
            op_norm(apply, (30,), CELL, 1.0, 2.0, candidates=[40])


class TestPowerIteration:
    def test_identity(self):
        res = op_norm(lambda f: f, (40,), CELL, 2.0, 2.0,
                      apply_adjoint=lambda f: f)
        assert res.certificate == "exact"
        assert abs(res.value - 1.0) < 1e-12

    def test_diagonal_multiplier_supremum(self):
        rng = np.random.default_rng(3)
        diag = rng.uniform(-2.0, 2.0, 64)
        apply = lambda f: diag * f
        # near-degenerate top eigenvalues converge slowly: tighten the stop
        res = op_norm(apply, (64,), CELL, 2.0, 2.0, apply_adjoint=apply,
                      tol=1e-13, max_iter=500)
        assert abs(res.value - np.abs(diag).max()) < 1e-9

    def test_psd_matrix_against_dense_eigensolver(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((30, 30))
        a = a @ a.T / 30.0
        apply = lambda f: a @ f
        res = op_norm(apply, (30,), CELL, 2.0, 2.0, apply_adjoint=apply)
        oracle = np.linalg.eigvalsh(a).max()
        assert res.value <= oracle + 1e-9   # always a true lower bound
        assert res.value >= oracle - 1e-8

    def test_unitary_diagonal_complex(self):
        rng = np.random.default_rng(3)
        phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, 40))
        res = op_norm(lambda f: phase * f, (40,), CELL, 2.0, 2.0,
                      apply_adjoint=lambda f: np.conj(phase) * f)
        assert abs(res.value - 1.0) < 1e-9

    def test_intermediate_exponent_is_certified_lower_bound(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((30, 30))
        a = a @ a.T / 30.0
        apply = lambda f: a @ f
        res = op_norm(apply, (30,), CELL, 1.5, 2.0, apply_adjoint=apply)
        assert res.certificate == "lower_bound"
        assert 0.0 < res.value < np.inf
        assert isinstance(res, OpNormResult)
        # the certified value never exceeds the interpolation bound through
        # the exact endpoint norms (Riesz-Thorin on the weighted spaces)
        n12 = op_norm(apply, (30,), CELL, 1.0, 2.0).value
        n22 = op_norm(apply, (30,), CELL, 2.0, 2.0, apply_adjoint=apply).value
        theta = 2.0 * (1.0 - 1.0 / 1.5)  # 1/p = (1-theta)/1 + theta/2
        assert res.value <= n12 ** (1.0 - theta) * n22 ** theta + 1e-9

    def test_deterministic_for_fixed_seed(self):
        rng = np.random.default_rng(11)
        mat = rng.standard_normal((25, 25))
        apply = lambda f: mat @ f
        adj = lambda f: mat.T @ f
        a = op_norm(apply, (25,), CELL, 2.0, 2.0, apply_adjoint=adj, seed=4)
        b = op_norm(apply, (25,), CELL, 2.0, 2.0, apply_adjoint=adj, seed=4)
        assert a.value == b.value and a.iterations == b.iterations


class TestValidation:
    apply = staticmethod(lambda f: f)

    def test_rejected_exponents(self):
        with pytest.raises(DomainError):
            op_norm(self.apply, (8,), CELL, 0.5, 2.0)
        with pytest.raises(DomainError):
            op_norm(self.apply, (8,), CELL, 2.5, 2.0)
        with pytest.raises(DomainError):
            op_norm(self.apply, (8,), CELL, 1.5, 1.7)

    def test_power_needs_adjoint_and_p_above_one(self):
        with pytest.raises(DomainError):
            op_norm(self.apply, (8,), CELL, 1.5, 2.0)  # no adjoint
        with pytest.raises(DomainError):
            op_norm(self.apply, (8,), CELL, 1.0, 2.0, method="power")

    def test_columns_need_p_one(self):
        with pytest.raises(DomainError):
            op_norm(self.apply, (8,), CELL, 2.0, 2.0, method="columns")

    def test_bad_cell_volume_and_budgets(self):
        with pytest.raises(DomainError):
            op_norm(self.apply, (8,), -1.0, 1.0, 2.0)
        with pytest.raises(DomainError):
            op_norm(self.apply, (8,), CELL, 2.0, 2.0,
                    apply_adjoint=self.apply, max_iter=0)
        with pytest.raises(DomainError):
            op_norm(self.apply, (8,), CELL, 2.0, 2.0,
                    apply_adjoint=self.apply, tol=0.0)
        with pytest.raises(DomainError):
            op_norm(self.apply, (8,), CELL, 2.0, 2.0, method="magic")
