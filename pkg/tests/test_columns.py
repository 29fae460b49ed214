"""Tests for the L^1 column evaluator and the pointwise heat kernel."""

import numpy as np
import pytest

from grushin.engine import schwartz_kernel_column
from grushin.errors import DomainError
from grushin.fields import GrushinGrid, MultiplierProfile, SpectralTruncation
from grushin.hermite import PrimeGrid
from grushin.lab.columns import (
    bochner_riesz_radial_kernel,
    heat_kernel_pointwise,
    l1_multiplier_norm,
    planar_radial_kernel,
)

S = np.pi / 2.0


def br_profile(radius, delta):
    return MultiplierProfile(
        lambda lam: np.maximum(0.0, 1.0 - np.asarray(lam) / (radius * radius))
        ** delta,
        (0.0, radius * radius))


class TestRadialKernels:
    def test_closed_form_matches_quadrature(self):
        # the compactly-supported mean has an explicit Bessel form; the
        # generic Hankel quadrature must reproduce it (trapezoid endpoint
        # error scales with the smoothness of (1 - v)^delta at v = 1)
        r = np.linspace(0.0, 6.0, 301)
        for radius, delta, tol in ((5.0, 0.7, 1e-4), (5.0, 2.0, 1e-5)):
            prof = br_profile(radius, delta)
            closed = bochner_riesz_radial_kernel(radius, delta, r)
            quad = planar_radial_kernel(prof, r, radius * radius)
            assert np.max(np.abs(closed - quad)) < tol * np.max(np.abs(closed))

    def test_origin_value_is_total_symbol_mass(self):
        # K(0) = (1/2 pi) int_0^inf F(s^2) s ds in the planar normalization
        radius, delta = 3.0, 1.5
        val = bochner_riesz_radial_kernel(radius, delta, np.array([0.0]))[0]
        s = np.linspace(0.0, radius, 200001)
        f = np.maximum(0.0, 1.0 - (s / radius) ** 2) ** delta
        want = np.trapezoid(f * s, s) / (2.0 * np.pi)
        assert val == pytest.approx(want, rel=1e-10)

    def test_rejects_bad_parameters(self):
        with pytest.raises(DomainError):
            bochner_riesz_radial_kernel(0.0, 1.0, np.array([0.5]))
        with pytest.raises(DomainError):
            bochner_riesz_radial_kernel(2.0, -0.5, np.array([0.5]))


class TestL1MultiplierNorm:
    def test_resolution_convergence(self):
        # doubling the second-layer bins moves the value at the 1e-3 level
        radius, delta, u = 4.0, 0.5, 0.1
        closed = lambda r: bochner_riesz_radial_kernel(radius, delta, r)
        base = l1_multiplier_norm(br_profile(radius, delta), S, u=u,
                                  lambda_max=radius ** 2, xi_zero_radial=closed)
        fine = l1_multiplier_norm(br_profile(radius, delta), S, u=u,
                                  lambda_max=radius ** 2, xi_zero_radial=closed,
                                  fft_oversample=4)
        assert abs(base - fine) / fine < 5e-3

    def test_zone_split_matches_dense_evaluation(self):
        # the split core/bulk accounting must agree with the dense reference
        # (core zone covering the whole domain) on the same discretization
        for radius, delta, u in ((4.0, 0.5, 0.1), (8.0, 0.2, 0.0)):
            closed = lambda r: bochner_riesz_radial_kernel(radius, delta, r)
            split = l1_multiplier_norm(br_profile(radius, delta), S, u=u,
                                       lambda_max=radius ** 2,
                                       xi_zero_radial=closed)
            dense = l1_multiplier_norm(br_profile(radius, delta), S, u=u,
                                       lambda_max=radius ** 2,
                                       xi_zero_radial=closed,
                                       core_half_width=1e9)
            assert abs(split - dense) / dense < 1e-4

    def test_rejects_bad_arguments(self):
        prof = br_profile(4.0, 0.5)
        with pytest.raises(DomainError):
            l1_multiplier_norm(prof, -1.0)
        with pytest.raises(DomainError):
            l1_multiplier_norm(prof, S, points_per_wavelength=1.0)
        with pytest.raises(DomainError):
            l1_multiplier_norm(prof, S, fft_oversample=0)
        with pytest.raises(DomainError):
            l1_multiplier_norm(prof, S, extent=-3.0)
        with pytest.raises(DomainError):
            l1_multiplier_norm(prof, S, u=50.0)  # foot outside resolved region
        unbounded = MultiplierProfile(lambda lam: np.exp(-np.asarray(lam)),
                                      (0.0, np.inf))
        with pytest.raises(DomainError):
            l1_multiplier_norm(unbounded, S)  # no eigenvalue cap


class TestHeatKernelPointwise:
    def test_matches_engine_column(self):
        # engine config with verified truncation margins; compare at a
        # handful of nodes spanning on/off axis and both layers
        grid = GrushinGrid(PrimeGrid(8.0, 192, 2), 1.0, 128, 1)
        trunc = SpectralTruncation(k_max=48, lambda_max=280.0)
        t = 0.1
        col = schwartz_kernel_column(MultiplierProfile.heat(t), grid,
                                     (1.0, 0.5), (0.0,), trunc)
        vals = col.values.real
        ax1 = grid.prime.axis
        ax3 = grid.second_axis
        worst = 0.0
        for tx1, tx2, tx3 in ((1.25, -0.5, 0.75), (0.0, 0.0, 0.0),
                              (1.25, 0.0, 0.0), (0.0, -0.5, 0.75),
                              (2.0, 1.0, -0.9)):
            a = int(np.argmin(np.abs(ax1 - tx1)))
            b = int(np.argmin(np.abs(ax1 - tx2)))
            c = int(np.argmin(np.abs(ax3 - tx3)))
            x = ((ax1[a], ax1[b]), (ax3[c],))
            mehler = heat_kernel_pointwise(x, ((1.0, 0.5), (0.0,)), t, 1.0)
            worst = max(worst, abs(vals[a, b, c] - mehler) / abs(mehler))
        assert worst < 1e-9

    def test_elliptic_limit_off_axis(self):
        # for |x'| = 2 and tiny t the operator looks like a Laplacian with
        # coefficient |x'|^2 in the second layer: the on-diagonal value is
        # (4 pi t)^{-3/2} / |x'|
        for t, tol in ((0.01, 2e-2), (0.002, 2e-4)):
            got = heat_kernel_pointwise(((2.0, 0.0), (0.0,)),
                                        ((2.0, 0.0), (0.0,)), t, 6.0)
            want = (4.0 * np.pi * t) ** -1.5 / 2.0
            assert abs(got - want) / want < tol

    def test_symmetric_and_positive(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            p = rng.uniform(-2.0, 2.0, 3)
            q = rng.uniform(-2.0, 2.0, 3)
            a = heat_kernel_pointwise(((p[0], p[1]), (p[2],)),
                                      ((q[0], q[1]), (q[2],)), 0.2, 3.0)
            b = heat_kernel_pointwise(((q[0], q[1]), (q[2],)),
                                      ((p[0], p[1]), (p[2],)), 0.2, 3.0)
            assert a > 0.0
            assert abs(a - b) <= 1e-12 * a

    def test_one_prime_dimension_heat_mass(self):
        # integrating the kernel over the whole slab recovers total mass one;
        # check against a direct grid sum in d1 = 1
        t = 0.15
        half = 3.0
        n1, n2 = 400, 256
        x1 = np.linspace(-10.0, 10.0, n1)
        x2 = (np.arange(n2) - n2 // 2) * (2.0 * half / n2)
        vals = np.array([[heat_kernel_pointwise(((a,), (b,)), ((0.5,), (0.0,)),
                                                t, half)
                          for b in x2] for a in x1])
        mass = vals.sum() * (x1[1] - x1[0]) * (2.0 * half / n2)
        assert mass == pytest.approx(1.0, rel=1e-3)

    def test_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            heat_kernel_pointwise(((0.0,), (0.0,)), ((0.0,), (0.0,)), 0.0, 1.0)
        with pytest.raises(DomainError):
            heat_kernel_pointwise(((0.0,), (0.0,)), ((0.0, 0.0), (0.0,)),
                                  0.1, 1.0)
        with pytest.raises(DomainError):
            heat_kernel_pointwise(((0.0,), (0.0, 0.0)), ((0.0,), (0.0, 0.0)),
                                  0.1, 1.0)
