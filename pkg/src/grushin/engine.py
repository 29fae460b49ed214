"""Spectral multiplier engine on the product grid.

A partial Fourier transform in the torus variables block-diagonalizes the
operator into a family of scaled harmonic oscillators indexed by the dual
lattice.  Applying a multiplier profile then means: transform, weight each
oscillator eigenspace by the profile value at its eigenvalue, synthesize, and
transform back.  Frequencies with equal magnitude share one eigenfunction
table, so slices are processed in |xi| groups.

The zero frequency is special: there the operator degenerates to the Euclidean
Laplacian in x' alone, and the slice is handled by a zero-padded DFT multiplier
(or dropped, per the truncation policy).
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, TruncationError
from .fields import Field, GrushinGrid, MultiplierProfile, SpectralTruncation, delta_field
from .hermite import PrimeGrid
from .oscillator import (
    _level_weights,
    active_level_range,
    oscillator_synthesis,
    oscillator_transform,
)


def _phase(grid: GrushinGrid) -> np.ndarray:
    """Product of per-axis signs (-1)^m translating FFT phases to the torus origin.

    The torus axis starts at -S, not 0, so each FFT bin m picks up e^{i pi m}.
    The same sign array serves both transform directions.
    """
    s = 1.0 - 2.0 * (np.abs(grid.xi_index) % 2)
    out = s
    for _ in range(grid.d2 - 1):
        out = np.multiply.outer(out, s)
    return out


def partial_fourier(field: Field) -> np.ndarray:
    """Transform the torus axes; returns an array in FFT frequency order.

    Normalization is (2 pi)^{-d2/2} times the Riemann sum with cell weight, so
    Parseval holds with dual cell weight xi_spacing^d2 on the lattice side.
    """
    g = field.grid
    axes = tuple(range(g.prime.d1, g.prime.d1 + g.d2))
    vals = np.fft.fftn(field.values, axes=axes)
    vals *= _phase(g)
    vals *= (g.second_spacing / np.sqrt(2.0 * np.pi)) ** g.d2
    return vals


def inverse_partial_fourier(grid: GrushinGrid, fhat: np.ndarray) -> Field:
    """Inverse of partial_fourier."""
    if fhat.shape != grid.shape:
        raise DomainError(f"fhat shape {fhat.shape} does not match grid {grid.shape}")
    axes = tuple(range(grid.prime.d1, grid.prime.d1 + grid.d2))
    vals = np.fft.ifftn(fhat * _phase(grid), axes=axes)
    vals *= (np.sqrt(2.0 * np.pi) / grid.second_spacing) ** grid.d2
    return Field(grid, vals)


def xi_groups(grid: GrushinGrid):
    """[(xi_mag, flat_indices)] over the dual lattice, grouped by |xi|, ascending.

    flat_indices index the flattened torus axes (C order), matching
    values.reshape(prime_shape + (-1,)).
    """
    m = grid.xi_index
    if grid.d2 == 1:
        key = (np.abs(m).astype(np.int64)) ** 2
    else:
        k1, k2 = np.meshgrid(m, m, indexing="ij")
        key = (k1.astype(np.int64) ** 2 + k2.astype(np.int64) ** 2).reshape(-1)
    order = np.argsort(key, kind="stable")
    sorted_key = key[order]
    groups = []
    start = 0
    for stop in range(1, order.size + 1):
        if stop == order.size or sorted_key[stop] != sorted_key[start]:
            xi_mag = grid.xi_spacing * float(np.sqrt(sorted_key[start]))
            groups.append((xi_mag, order[start:stop]))
            start = stop
    return groups


def _apply_xi_zero(profile: MultiplierProfile, slab: np.ndarray, prime: PrimeGrid,
                   mode: str) -> np.ndarray:
    """Euclidean functional calculus in x' on the zero-frequency slice.

    Uses a 2x zero-padded DFT so the implicit periodization does not fold the
    kernel back into the window.  The profile's own support masks the symbol;
    the policy's lambda_max is deliberately not imposed here, since a hard
    spectral edge on this slice would ring against the crop back to the window
    (the ceiling exists to bound oscillator levels, which this slice has none
    of).
    """
    if mode == "drop":
        return np.zeros_like(slab)
    d1 = prime.d1
    n = prime.n_points
    pad = 2 * n
    fp = np.zeros((pad,) * d1 + slab.shape[d1:], dtype=complex)
    fp[(slice(0, n),) * d1] = slab
    spec_axes = tuple(range(d1))
    spec = np.fft.fftn(fp, axes=spec_axes)
    zeta = 2.0 * np.pi * np.fft.fftfreq(pad, d=prime.spacing)
    lam = np.zeros((pad,) * d1)
    for axis in range(d1):
        shape = [1] * d1
        shape[axis] = pad
        lam = lam + (zeta ** 2).reshape(shape)
    w = np.asarray(profile(lam), dtype=complex)
    spec *= w.reshape(w.shape + (1,) * (slab.ndim - d1))
    out = np.fft.ifftn(spec, axes=spec_axes)
    return out[(slice(0, n),) * d1]


def apply_multiplier(profile: MultiplierProfile, field: Field,
                     trunc: SpectralTruncation) -> Field:
    """Apply F(L) to a field under the given truncation policy.

    Raises TruncationError, naming the first offending (level, |xi|) pair, if
    the profile's support within [0, lambda_max] requires a level beyond the
    policy's k_max or beyond what the x' grid can represent reliably.
    """
    grid = field.grid
    prime = grid.prime
    d1 = prime.d1
    fhat = partial_fourier(field)
    fh = fhat.reshape(fhat.shape[:d1] + (-1,))
    out = np.zeros_like(fh)
    for xi_mag, idx in xi_groups(grid):
        if xi_mag == 0.0:
            out[..., idx] = _apply_xi_zero(profile, fh[..., idx], prime,
                                           trunc.xi_zero_mode)
            continue
        k_lo, k_hi = active_level_range(profile, xi_mag, d1, trunc.lambda_max)
        if k_hi < k_lo:
            continue
        if k_hi > trunc.k_max:
            raise TruncationError(k_hi, xi_mag, trunc.k_max)
        cap = prime.reliable_level_cap(xi_mag)
        if k_hi > cap:
            raise TruncationError(k_hi, xi_mag, cap)
        coef = oscillator_transform(fh[..., idx], prime, xi_mag, k_hi)
        levels = _level_weights(coef.shape, d1)
        weights = np.asarray(profile((2 * levels + d1) * xi_mag), dtype=complex)
        weights[levels < k_lo] = 0.0
        out[..., idx] = oscillator_synthesis(coef * weights[..., None], prime, xi_mag)
    return inverse_partial_fourier(grid, out.reshape(grid.shape))


def heat_apply(t: float, field: Field, trunc: SpectralTruncation) -> Field:
    """Heat semigroup e^{-tL}; spectral support is ceiled where the symbol
    drops below ~1e-14 so far-out levels are never requested."""
    return apply_multiplier(MultiplierProfile.heat(t), field, trunc)


def bochner_riesz_apply(t: float, delta: float, field: Field,
                        trunc: SpectralTruncation) -> Field:
    """(1 - tL)_+^delta."""
    profile = MultiplierProfile.bochner_riesz(t, delta)
    return apply_multiplier(profile, field, trunc)


def wave_cosine_apply(s: float, field: Field, trunc: SpectralTruncation) -> Field:
    """cos(s sqrt(L)), sharply band-limited by the policy's lambda_max."""
    return apply_multiplier(MultiplierProfile.wave_cosine(s), field, trunc)


def schwartz_kernel_column(profile: MultiplierProfile, grid: GrushinGrid,
                           y_prime, y_second,
                           trunc: SpectralTruncation) -> Field:
    """Kernel column K_F(., y): the profile applied to a unit-mass node delta.

    y must be a grid node; off-grid points raise ContractViolation.
    """
    return apply_multiplier(profile, delta_field(grid, y_prime, y_second), trunc)
