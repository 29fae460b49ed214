"""Pointwise and L^1 column evaluators that bypass the tensor grid engine.

Two tools live here, both specialized to two prime coordinates and one torus
coordinate and both choosing their own discretizations:

* an L^1 norm for multiplier kernel columns, split into a small core square
  in x' that carries every torus frequency and a wide bulk zone where only
  the low frequencies can reach (higher slabs die off inside the core), and
* a closed-form heat kernel evaluator built from the oscillator semigroup
  kernel per frequency, with no level truncation at all.

Unlike the radial norm path, these include the zero torus frequency: its
slab is the free-plane functional calculus of the multiplier, entering the
lattice sum with the same weight as every other frequency.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import j0, jv, gamma as _gamma_fn

from ..errors import DomainError
from ..hermite import hermite_table, hermite_zero_values

__all__ = [
    "bochner_riesz_radial_kernel",
    "planar_radial_kernel",
    "l1_multiplier_norm",
    "heat_kernel_pointwise",
]

_BLOCK_BUDGET = 6.0e6  # floats per spectral block held at once


def bochner_riesz_radial_kernel(scale: float, delta: float,
                                r: np.ndarray) -> np.ndarray:
    """Radial kernel profile of (1 + Laplacian/scale^2)_+^delta in the plane.

    Closed form via the Bessel function of order delta + 1; the removable
    r = 0 singularity is filled with its limit.
    """
    if scale <= 0:
        raise DomainError("scale must be positive")
    if delta < 0:
        raise DomainError("delta must be >= 0")
    z = scale * np.asarray(r, dtype=float)
    small = z < 1e-8
    zz = np.where(small, 1.0, z)
    vals = (scale ** 2 / (2.0 * np.pi) * 2.0 ** delta * _gamma_fn(delta + 1.0)
            * jv(delta + 1.0, zz) / zz ** (delta + 1.0))
    return np.where(small, scale ** 2 / (4.0 * np.pi * (delta + 1.0)), vals)


def planar_radial_kernel(profile, r: np.ndarray,
                         lambda_max: float) -> np.ndarray:
    """Radial kernel profile of F(-Laplacian) in the plane, by quadrature.

    Hankel form (2 pi)^{-1} int F(rho^2) J_0(rho r) rho drho over the
    support of F capped at lambda_max.  Quadrature density follows the
    fastest oscillation J_0(rho r_max).
    """
    r = np.asarray(r, dtype=float)
    lo, hi = profile.support
    top = min(hi, lambda_max)
    if not np.isfinite(top) or top <= 0:
        raise DomainError("need a finite positive eigenvalue cap")
    rho_lo = np.sqrt(max(lo, 0.0))
    rho_hi = np.sqrt(top)
    r_max = float(np.max(np.abs(r))) if r.size else 1.0
    n_rho = max(512, int(np.ceil(4.0 * (rho_hi - rho_lo)
                                 * max(r_max, 1.0) / np.pi)))
    rho = np.linspace(rho_lo, rho_hi, n_rho + 1)
    w = np.full(rho.size, rho[1] - rho[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    fvals = np.asarray(profile(rho * rho)).real * rho * w
    return (j0(np.multiply.outer(r, rho)) @ fvals) / (2.0 * np.pi)


def _kernel_slab_coeff(profile, xi: float, k_cap: int, u: float,
                       lambda_max: float):
    """Even-column coefficient matrix of one frequency slab at y' = (u, 0).

    Returns (C, even_index) with C[m, n] = F((2(m + n_e) + 2) xi) h_m(s u)
    h_{n_e}(0) over levels m <= k_cap and even n_e; odd second indices drop
    out because the axis eigenfunctions vanish at 0.
    """
    sq = np.sqrt(xi)
    h_u = hermite_table(k_cap, np.array([sq * u]))[:, 0]
    h_0 = hermite_zero_values(k_cap)
    even = np.arange(0, k_cap + 1, 2)
    lam = (2.0 * np.add.outer(np.arange(k_cap + 1), even) + 2.0) * xi
    F = np.asarray(profile(lam)).real * (lam <= lambda_max * (1.0 + 1e-12))
    return F * h_u[:, None] * h_0[even][None, :], even


def l1_multiplier_norm(profile, torus_half_period: float, u: float = 0.0,
                       lambda_max: float | None = None,
                       points_per_wavelength: float = 4.0,
                       core_half_width: float | None = None,
                       xi_zero_radial=None, fft_oversample: int = 1,
                       extent: float | None = None) -> float:
    """L^1 norm of the multiplier kernel column based at ((u, 0), 0).

    The x' integration splits at a core square of half width core_half_width:
    inside, every torus frequency contributes and the frequency count sets
    the FFT size; outside, only frequencies reaching past the core survive
    (the rest are cut off exponentially at their classical radius), which
    keeps the wide-zone FFT short.  xi_zero_radial overrides the radial
    profile used for the zero-frequency slab (closed forms beat quadrature
    when available); default is the Hankel quadrature of the profile.

    The modulus of a band-limited kernel is not band-limited, so the torus
    integral of |K| carries a residual resolution error; fft_oversample
    doubles the bin count that many times for convergence studies.  Setting
    core_half_width beyond the resolved region degenerates the split into a
    dense all-frequency evaluation, useful as a reference.  extent overrides
    the integration half width in x'.
    """
    lo, hi = profile.support
    top = min(hi, lambda_max) if lambda_max is not None else hi
    if not np.isfinite(top) or top <= 0:
        raise DomainError("need a finite positive eigenvalue cap; pass "
                          "lambda_max or use a compactly supported profile")
    if torus_half_period <= 0:
        raise DomainError("torus half period must be positive")
    if points_per_wavelength < 2.0:
        raise DomainError("need at least 2 points per wavelength")
    dxi = np.pi / torus_half_period
    scale = np.sqrt(top)
    dx = 2.0 * np.pi / (points_per_wavelength * scale)
    j_max = int(np.floor(top / (2.0 * dxi) + 1e-12))
    if extent is None:
        # classical radius of the last slab plus a sub-Gaussian tail margin;
        # too narrow when the spectrum sits far below the first slab, so
        # slowly decaying near-planar kernels should pass extent explicitly
        extent = np.sqrt(top + 2.0 * dxi) / dxi + 4.0 / np.sqrt(dxi)
    elif extent <= 0 or not np.isfinite(extent):
        raise DomainError("extent must be finite and positive")
    if abs(u) > extent / 2.0:
        raise DomainError("column foot u is outside the resolved region")
    n_half = int(np.ceil(extent / dx))
    ax1 = dx * np.arange(-n_half, n_half + 1)
    ax2 = dx * np.arange(0, n_half + 1)  # even in x2: half grid, weight 2
    w2 = np.full(ax2.size, 2.0)
    w2[0] = 1.0
    if core_half_width is None:
        core_half_width = max(1.5, 2.5 * abs(u) + 1.5)
    if fft_oversample < 1:
        raise DomainError("fft_oversample must be >= 1")
    over = 1 << max(0, int(np.ceil(np.log2(fft_oversample))))
    j_split = min(j_max, int(np.ceil(1.35 * scale / core_half_width / dxi)) + 2)
    n_fft_core = over << int(np.ceil(np.log2(4 * j_max + 4)))
    n_fft_bulk = over << int(np.ceil(np.log2(4 * j_split + 4)))

    if xi_zero_radial is None:
        def xi_zero_radial(r, _p=profile, _t=top):
            return planar_radial_kernel(_p, r, _t)
    # cubic spline of the radial zero slab at 16 samples per wavelength:
    # interpolation error ~(scale dr)^4 stays below the zone-split error
    r_grid = np.arange(0.0, extent * 2.83 + 2.0 * dx, 0.25 * dx)
    zero_slab = CubicSpline(r_grid, np.asarray(xi_zero_radial(r_grid),
                                               dtype=float))

    def slab_level(j):
        xi = j * dxi
        return int(np.floor((top / xi - 2.0) / 2.0 + 1e-12))

    def accumulate(x1, x2, wgt2, j_list, n_fft, keep=None):
        if keep is not None and not keep.any():
            return 0.0
        acc = 0.0
        block = max(1, int(_BLOCK_BUDGET / (x2.size * (n_fft // 2 + 1))))
        tables2 = {}
        for j in j_list:
            k_cap = slab_level(j)
            if k_cap >= 0:
                tables2[j] = hermite_table(k_cap, np.sqrt(j * dxi) * x2)
        for i0 in range(0, x1.size, block):
            i1 = min(x1.size, i0 + block)
            spec = np.zeros((i1 - i0, x2.size, n_fft // 2 + 1))
            rr = np.sqrt((x1[i0:i1, None] - u) ** 2 + x2[None, :] ** 2)
            spec[:, :, 0] = zero_slab(rr)
            for j in j_list:
                k_cap = slab_level(j)
                if k_cap < 0:
                    continue
                xi = j * dxi
                C, even = _kernel_slab_coeff(profile, xi, k_cap, u, top)
                H1 = hermite_table(k_cap, np.sqrt(xi) * x1[i0:i1])
                # alternating sign recenters the transform on [-S, S)
                spec[:, :, j] = ((-1) ** j * xi
                                 * (H1.T @ C @ tables2[j][even, :]))
            vals = np.abs(np.fft.irfft(spec, n=n_fft, axis=2))
            if keep is not None:
                vals *= keep[i0:i1, :, None]
            acc += float((vals.sum(axis=2) * wgt2[None, :]).sum())
        return acc

    core1 = np.abs(ax1) <= core_half_width
    core2 = ax2 <= core_half_width
    outside = ~(core1[:, None] & core2[None, :])
    total = accumulate(ax1, ax2, w2, range(1, j_split + 1), n_fft_bulk,
                       keep=outside)
    total += accumulate(ax1[core1], ax2[core2], w2[core2],
                        range(1, j_max + 1), n_fft_core)
    return total * dx * dx


def heat_kernel_pointwise(x, y, t: float, torus_half_period: float) -> float:
    """Heat kernel p_t(x, y) on the torus-compactified model, closed form.

    Per torus frequency the prime-coordinate factor is the oscillator
    semigroup kernel (a Gaussian in disguise), so there is no level
    truncation anywhere: the frequency sum is cut only where its terms fall
    below machine noise.  Points are (x_prime_tuple, x_second_tuple) with
    one torus coordinate; any prime dimension up to 3.
    """
    if t <= 0:
        raise DomainError("time must be positive")
    if torus_half_period <= 0:
        raise DomainError("torus half period must be positive")
    xp = np.asarray(x[0], dtype=float)
    yp = np.asarray(y[0], dtype=float)
    if xp.shape != yp.shape or xp.ndim != 1 or not (1 <= xp.size <= 3):
        raise DomainError("prime parts must match with dimension 1..3")
    if len(x[1]) != 1 or len(y[1]) != 1:
        raise DomainError("exactly one torus coordinate is supported")
    d1 = xp.size
    ds = float(x[1][0]) - float(y[1][0])
    dp2 = float(np.sum((xp - yp) ** 2))
    dxi = np.pi / torus_half_period
    # free-plane slab at zero frequency
    total = (4.0 * np.pi * t) ** (-d1 / 2.0) * np.exp(-dp2 / (4.0 * t))
    j_max = max(1, int(np.ceil(46.0 / (2.0 * t * dxi))))
    xi = dxi * np.arange(1, j_max + 1)
    rho = np.exp(-2.0 * t * xi)
    one_m = 1.0 - rho * rho
    factor = xi ** (d1 / 2.0) * np.exp(-d1 * t * xi) \
        * (np.pi * one_m) ** (-d1 / 2.0)
    expo = np.zeros_like(xi)
    for a in range(d1):
        sa, sb = xi ** 0.5 * xp[a], xi ** 0.5 * yp[a]
        ss = sa * sa + sb * sb
        expo += (2.0 * sa * sb * rho - ss * rho * rho) / one_m - 0.5 * ss
    total += 2.0 * float(np.sum(np.cos(xi * ds) * factor * np.exp(expo)))
    return total / (2.0 * torus_half_period)
