"""Tests for the scaled-oscillator spectral calculus on a single slice."""

import numpy as np
import pytest

from grushin.errors import DegenerateInputError, DomainError, TruncationError
from grushin.fields import MultiplierProfile
from grushin.hermite import PrimeGrid, hermite_table
from grushin.oscillator import (
    RatioReport,
    XiSlice,
    active_level_range,
    apply_multiplier_oscillator,
    oscillator_synthesis,
    oscillator_transform,
    phi_xi_eval,
    restriction_norm_level,
    weighted_oscillator_check,
)


class TestXiSlice:
    def test_eigenvalue_formula(self):
        s = XiSlice(xi_mag=3.0, d1=2, k_max=10)
        assert s.eigenvalue(0) == 6.0
        assert s.eigenvalue(4) == 30.0

    def test_rejects_bad_parameters(self):
        with pytest.raises(DomainError):
            XiSlice(xi_mag=0.0, d1=1, k_max=5)
        with pytest.raises(DomainError):
            XiSlice(xi_mag=1.0, d1=0, k_max=5)
        with pytest.raises(DomainError):
            XiSlice(xi_mag=1.0, d1=1, k_max=-1)


class TestEigenfunctions:
    @pytest.mark.parametrize("xi", [0.5, 2.0, 8.0])
    def test_normalization_1d(self, xi):
        grid = PrimeGrid(15.0, 2048, 1)
        for nu in [(0,), (1,), (3,)]:
            phi = phi_xi_eval(nu, xi, grid.axis[:, None])
            assert np.sum(phi ** 2) * grid.cell == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("xi", [0.5, 2.0])
    def test_normalization_2d(self, xi):
        grid = PrimeGrid(10.0, 256, 2)
        x1, x2 = np.meshgrid(grid.axis, grid.axis, indexing="ij")
        phi = phi_xi_eval((1, 2), xi, np.stack([x1, x2], axis=-1))
        assert np.sum(phi ** 2) * grid.cell == pytest.approx(1.0, abs=1e-10)

    def test_orthogonality(self):
        grid = PrimeGrid(12.0, 1024, 1)
        a = phi_xi_eval((2,), 1.5, grid.axis[:, None])
        b = phi_xi_eval((5,), 1.5, grid.axis[:, None])
        assert abs(np.sum(a * b) * grid.cell) < 1e-12

    def test_scaling_covariance(self):
        # Phi_nu^{s^2 xi}(x) = s^{d1/2} Phi_nu^xi(s x), exactly
        rng = np.random.default_rng(12)
        x = rng.uniform(-2.0, 2.0, size=(50, 2))
        s, xi = 1.7, 0.8
        left = phi_xi_eval((1, 3), s * s * xi, x)
        right = s ** (2 / 2.0) * phi_xi_eval((1, 3), xi, s * x)
        assert np.max(np.abs(left - right)) < 1e-7 * np.max(np.abs(right))

    def test_eigen_residual_against_fourier_laplacian(self):
        # independent oracle: differentiate by FFT (no Hermite recurrences)
        # and check (-Lap + xi^2 |x|^2) Phi = (2|nu| + d1) xi Phi
        grid = PrimeGrid(7.0, 256, 2)
        xi, nu = 2.0, (1, 2)
        x1, x2 = np.meshgrid(grid.axis, grid.axis, indexing="ij")
        phi = phi_xi_eval(nu, xi, np.stack([x1, x2], axis=-1))
        kappa = 2.0 * np.pi * np.fft.fftfreq(grid.n_points, d=grid.spacing)
        phi_hat = np.fft.fft2(phi)
        lap = np.fft.ifft2(-(kappa[:, None] ** 2 + kappa[None, :] ** 2) * phi_hat).real
        lhs = -lap + xi ** 2 * (x1 ** 2 + x2 ** 2) * phi
        lam = (2 * (nu[0] + nu[1]) + 2) * xi
        resid = np.linalg.norm(lhs - lam * phi) / np.linalg.norm(lam * phi)
        assert resid < 1e-5


class TestActiveLevelRange:
    def test_interior_band(self):
        prof = MultiplierProfile.indicator(3.0, 10.0)
        assert active_level_range(prof, 1.0, 1, 100.0) == (1, 4)

    def test_edge_eigenvalue_included(self):
        prof = MultiplierProfile.indicator(3.0, 9.0)
        # eigenvalue (2*4+1)*1 = 9 sits exactly on the support edge
        assert active_level_range(prof, 1.0, 1, 100.0)[1] == 4

    def test_lambda_cap_shrinks_range(self):
        prof = MultiplierProfile.indicator(3.0, 10.0)
        assert active_level_range(prof, 1.0, 1, 7.0) == (1, 3)

    def test_empty_when_support_above_cap(self):
        prof = MultiplierProfile.indicator(1000.0, 2000.0)
        k_lo, k_hi = active_level_range(prof, 1.0, 1, 100.0)
        assert k_hi < k_lo


@pytest.fixture(scope="module")
def grid2d():
    return PrimeGrid(10.0, 128, 2)


def random_span_field(grid, xi, k_hi, seed):
    """Random element of span{Phi_nu^xi : all components <= k_hi}."""
    rng = np.random.default_rng(seed)
    shape = (k_hi + 1,) * grid.d1
    coef = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return oscillator_synthesis(coef, grid, xi), coef


class TestTransform:
    def test_round_trip_on_span(self, grid2d):
        f, coef = random_span_field(grid2d, 1.5, 6, seed=3)
        back = oscillator_transform(f, grid2d, 1.5, 6)
        assert np.max(np.abs(back - coef)) < 1e-10 * np.max(np.abs(coef))

    def test_parseval_on_span(self, grid2d):
        f, coef = random_span_field(grid2d, 2.0, 5, seed=4)
        nf2 = np.sum(np.abs(f) ** 2) * grid2d.cell
        assert nf2 == pytest.approx(float(np.sum(np.abs(coef) ** 2)), rel=1e-10)

    def test_linearity(self, grid2d):
        f, _ = random_span_field(grid2d, 1.0, 4, seed=5)
        g, _ = random_span_field(grid2d, 1.0, 4, seed=6)
        lhs = oscillator_transform(2.0 * f - 1j * g, grid2d, 1.0, 4)
        rhs = (2.0 * oscillator_transform(f, grid2d, 1.0, 4)
               - 1j * oscillator_transform(g, grid2d, 1.0, 4))
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * np.max(np.abs(rhs))

    def test_batched_matches_loop(self, grid2d):
        rng = np.random.default_rng(7)
        batch = rng.standard_normal((grid2d.n_points, grid2d.n_points, 3))
        all_at_once = oscillator_transform(batch, grid2d, 1.2, 4)
        for j in range(3):
            one = oscillator_transform(batch[..., j], grid2d, 1.2, 4)
            assert np.max(np.abs(all_at_once[..., j] - one)) \
                < 1e-13 * np.max(np.abs(one))


class TestApplyMultiplier:
    def test_identity_on_span(self, grid2d):
        xi, k_hi = 1.5, 6
        sl = XiSlice(xi, 2, 12)
        f, _ = random_span_field(grid2d, xi, k_hi, seed=8)
        top = (2 * (2 * k_hi) + 2) * xi + 1.0
        ident = MultiplierProfile.indicator(0.0, top)
        out = apply_multiplier_oscillator(ident, sl, f, grid2d)
        assert np.max(np.abs(out - f)) < 1e-8 * np.max(np.abs(f))

    def test_indicator_projects_single_level(self, grid2d):
        xi = 2.0
        sl = XiSlice(xi, 2, 10)
        # f = sum of level-1 and level-4 eigenfields
        x1, x2 = np.meshgrid(grid2d.axis, grid2d.axis, indexing="ij")
        pts = np.stack([x1, x2], axis=-1)
        f1 = phi_xi_eval((1, 0), xi, pts)
        f4 = phi_xi_eval((2, 2), xi, pts)
        f = 2.0 * f1 + 3.0 * f4
        lam1 = (2 * 1 + 2) * xi
        band = MultiplierProfile.indicator(lam1 - xi, lam1 + xi)
        out = apply_multiplier_oscillator(band, sl, f, grid2d)
        assert np.max(np.abs(out - 2.0 * f1)) < 1e-9 * np.max(np.abs(f1))

    def test_multiplicativity(self, grid2d):
        xi = 1.0
        sl = XiSlice(xi, 2, 14)
        f, _ = random_span_field(grid2d, xi, 6, seed=9)
        top = 30.0  # == eigenvalue at the slice cap, so every level is legal
        fp = MultiplierProfile(lambda lam: np.exp(-0.3 * lam), (0.0, 110.0))
        gp = MultiplierProfile(lambda lam: lam / (1.0 + lam) * (lam <= top),
                               (0.0, top))
        fg = MultiplierProfile(
            lambda lam: np.exp(-0.3 * lam) * lam / (1.0 + lam) * (lam <= top),
            (0.0, top))
        once = apply_multiplier_oscillator(fg, sl, f, grid2d)
        twice = apply_multiplier_oscillator(
            fp, sl, apply_multiplier_oscillator(gp, sl, f, grid2d), grid2d)
        assert np.max(np.abs(once - twice)) < 1e-9 * np.max(np.abs(once))

    def test_truncation_error_names_offender(self, grid2d):
        sl = XiSlice(1.0, 2, 3)
        f = np.zeros((grid2d.n_points,) * 2)
        wide = MultiplierProfile.indicator(0.0, 30.0)
        with pytest.raises(TruncationError) as err:
            apply_multiplier_oscillator(wide, sl, f, grid2d, lambda_max=30.0)
        assert err.value.level == 14
        assert err.value.k_max == 3

    def test_grid_cap_guards_unresolvable_levels(self):
        tiny = PrimeGrid(5.0, 64, 1)
        sl = XiSlice(1.0, 1, 500)
        wide = MultiplierProfile.indicator(0.0, 400.0)
        with pytest.raises(TruncationError) as err:
            apply_multiplier_oscillator(wide, sl, np.zeros(64), tiny)
        assert err.value.k_max == tiny.reliable_level_cap(1.0)

    def test_empty_band_returns_zero(self, grid2d):
        sl = XiSlice(1.0, 2, 10)
        f, _ = random_span_field(grid2d, 1.0, 3, seed=10)
        high = MultiplierProfile.indicator(500.0, 600.0)
        out = apply_multiplier_oscillator(high, sl, f, grid2d)
        assert np.count_nonzero(out) == 0


class TestRestrictionNorm:
    def test_ground_level_closed_form(self):
        # level sum at k=0 peaks at the origin with value pi^{-d1/2}
        for d1 in (1, 2, 3):
            for xi in (1.0, 3.0):
                want = (xi / np.pi) ** (d1 / 4.0)
                got = restriction_norm_level(0, xi, 1.0, d1)
                assert got == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("d1", [1, 2, 3])
    def test_xi_doubling_is_exact_quarter_power(self, d1):
        a = restriction_norm_level(5, 1.0, 1.0, d1)
        b = restriction_norm_level(5, 2.0, 1.0, d1)
        assert b / a == pytest.approx(2.0 ** (d1 / 4.0), rel=1e-14)

    def test_level_growth_rate_3d(self):
        # log-log slope of the norm against the eigenvalue, d1 = 3
        ks = np.array([4, 8, 16, 32, 64])
        norms = np.array([restriction_norm_level(int(k), 1.0, 1.0, 3) for k in ks])
        lam = 2.0 * ks + 3.0
        slope = np.polyfit(np.log(lam), np.log(norms), 1)[0]
        assert abs(slope - 0.25) < 0.15

    def test_rejects_bad_exponent(self):
        with pytest.raises(DomainError):
            restriction_norm_level(1, 1.0, 2.5, 1)
        with pytest.raises(DomainError) as err:
            restriction_norm_level(1, 1.0, 1.5, 1)
        assert "op_norm" in str(err.value)


class TestWeightedInequalities:
    def setup_method(self):
        self.grid = PrimeGrid(15.0, 2048, 1)
        self.table = hermite_table(40, self.grid.axis)

    def random_field(self, rng):
        c = rng.standard_normal(41)
        return c @ self.table

    def test_hardy_type_ratio_at_most_one(self):
        # || |x| f ||_2 <= xi^{-1} || L_xi^{1/2} f ||_2 on the oscillator span
        sl = XiSlice(1.0, 1, 40)
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(200):
            rep = weighted_oscillator_check(self.random_field(rng), sl, 1.0, self.grid)
            worst = max(worst, rep.ratio)
        assert worst <= 1.0 + 1e-12

    def test_second_power_ratio_at_most_sqrt5(self):
        sl = XiSlice(1.0, 1, 40)
        rng = np.random.default_rng(2025)
        worst = 0.0
        for _ in range(200):
            rep = weighted_oscillator_check(self.random_field(rng), sl, 2.0, self.grid)
            worst = max(worst, rep.ratio)
        assert worst <= np.sqrt(5.0) + 1e-12

    def test_gamma_zero_ratio_is_one(self):
        sl = XiSlice(1.0, 1, 40)
        rng = np.random.default_rng(2026)
        rep = weighted_oscillator_check(self.random_field(rng), sl, 0.0, self.grid)
        assert rep.ratio == pytest.approx(1.0, abs=1e-12)

    def test_zero_field_rejected(self):
        sl = XiSlice(1.0, 1, 10)
        with pytest.raises(DegenerateInputError):
            weighted_oscillator_check(np.zeros(2048), sl, 1.0, self.grid)

    def test_report_exposes_both_sides(self):
        sl = XiSlice(1.0, 1, 40)
        rng = np.random.default_rng(2027)
        rep = weighted_oscillator_check(self.random_field(rng), sl, 1.0, self.grid)
        assert isinstance(rep, RatioReport)
        assert rep.numerator > 0 and rep.denominator > 0
        assert rep.ratio == rep.numerator / rep.denominator
