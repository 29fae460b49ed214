"""End-to-end scaling experiments with frozen, measured configurations.

Each experiment sweeps one parameter of a spectral-multiplier family, measures
operator norms with an exact p = 1 estimator, and reduces the sweep to a small
summary: a fitted log-log slope against the exponent predicted by the
anisotropic dilation structure, or a max/min uniformity ratio.  Defaults are
desk-scale configurations whose truncation parameters were chosen by
convergence measurements; they run in seconds to a few minutes.

Every function returns an ExperimentResult: plot-ready CSV rows plus a
JSON-able summary embedding the certificates of all norms used.  Results are
deterministic for a fixed configuration and seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..engine import schwartz_kernel_column
from ..errors import AliasingError, ContractViolation, DomainError
from ..fields import GrushinGrid, MultiplierProfile, SpectralTruncation
from ..geometry import (
    MetricPoint,
    ball_volume_mc,
    ball_volume_model,
    doubling_ratio,
    grushin_distance,
    grushin_distance_arrays,
    grushin_distance_field,
)
from ..hermite import PrimeGrid
from .columns import (
    bochner_riesz_radial_kernel,
    heat_kernel_pointwise,
    l1_multiplier_norm,
)
from .profiles import CutoffSpec, PieceProfile, dyadic_pieces, sobolev_norm
from .radial import weighted_column_norms, weighted_operator_norm
from .reports import ScalingReport

__all__ = [
    "ExperimentResult",
    "band_profile",
    "weighted_restriction_experiment",
    "localized_restriction_experiment",
    "bochner_riesz_sweep",
    "multiplier_norm_experiment",
    "heat_gaussian_check",
    "kernel_support_check",
    "kernel_support_suite",
    "geometry_suite",
    "distance_table",
]


@dataclass(frozen=True)
class ExperimentResult:
    """Uniform experiment output: CSV rows plus a JSON-able summary."""

    kind: str
    header: List[str]
    rows: List[list]
    summary: dict


def _check_dims(dims, allowed: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    dims = tuple(int(v) for v in dims)
    if len(dims) != 2 or dims not in tuple(allowed):
        raise DomainError(
            f"dims={dims} not supported here; implemented for {list(allowed)}")
    return dims


def _check_exact_exponent(p: float) -> None:
    if p != 1.0:
        raise DomainError(
            "only p = 1 is implemented here (norms are exact column maxima); "
            "for p > 1 drive op_norm with an engine-backed operator directly")


def _restriction_precondition(p: float, gamma: float, d2: int) -> None:
    if gamma < 0:
        raise DomainError("weight exponent gamma must be >= 0")
    slack = d2 * (1.0 / p - 0.5)
    if gamma == 0.0:
        if p > (2.0 * d2 + 2.0) / (d2 + 3.0):
            raise DomainError(
                f"unweighted run needs p <= {(2 * d2 + 2) / (d2 + 3)}; got p={p}")
        return
    if not gamma < slack:
        raise DomainError(
            f"gamma={gamma} must satisfy gamma < d2 (1/p - 1/2) = {slack}")


def _increasing(values, name: str, minimum: int = 3) -> List[float]:
    vals = [float(v) for v in values]
    if len(vals) < minimum:
        raise DomainError(f"{name} needs at least {minimum} entries")
    if any(b <= a for a, b in zip(vals, vals[1:])) or vals[0] <= 0:
        raise DomainError(f"{name} must be positive and strictly increasing")
    return vals


def band_profile(radius: float,
                 bump: Optional[Callable] = None) -> MultiplierProfile:
    """Spectral band at scale R: bump(sqrt(lambda)/R), supported
    [R^2/16, R^2].

    The bump defaults to the standard dyadic cutoff, so the band family is a
    single profile dilated through R and the sweep isolates the R-exponent.
    """
    if radius <= 0:
        raise DomainError("band radius must be positive")
    eta = CutoffSpec.standard().eta if bump is None else bump
    return MultiplierProfile(
        lambda lam, R=radius: eta(np.sqrt(np.maximum(lam, 0.0)) / R),
        (radius * radius / 16.0, radius * radius))


def weighted_restriction_experiment(
        dims=(2, 1), p: float = 1.0, gamma: float = 0.0,
        radii: Sequence[float] = (4.0, 8.0, 16.0, 32.0), *,
        torus_half_period: float = math.pi, k_max: int = 4000,
        n_scan: int = 97) -> ExperimentResult:
    """Fit the norm of |x'|^gamma-weighted band multipliers against R.

    For each R the exact 1 -> 2 norm of w_gamma F_R(sqrt(L)) is the supremum
    over column feet of the weighted column L^2 norm; the maximizer search
    scans the prime radius.  The fitted log-log slope is compared with the
    dilation prediction (2 d2 + d1)(1/p - 1/2) - gamma.
    """
    d1, d2 = _check_dims(dims, [(2, 1)])
    _check_exact_exponent(p)
    _restriction_precondition(p, gamma, d2)
    radii = _increasing(radii, "radii")
    predicted = (2.0 * d2 + d1) * (1.0 / p - 0.5) - gamma

    rows: List[list] = []
    norms: List[float] = []
    for radius in radii:
        norm, u_star = weighted_operator_norm(
            band_profile(radius), gamma, torus_half_period,
            k_max=k_max, lambda_max=radius * radius, n_scan=n_scan)
        norms.append(norm)
        rows.append([radius, norm, u_star, "exact"])
    report = ScalingReport.fit(radii, norms, predicted)
    return ExperimentResult(
        kind="weighted_restriction",
        header=["radius", "norm", "maximizer_u", "certificate"],
        rows=rows,
        summary={
            "p": p, "gamma": gamma, "predicted_slope": predicted,
            "fitted_slope": report.fitted_slope,
            "slope_stderr": report.slope_stderr,
            "report": report.to_dict(), "certificate": "exact",
        })


def localized_restriction_experiment(
        dims=(2, 1), p: float = 1.0, gamma: float = 0.25,
        radii: Sequence[float] = (8.0, 16.0, 32.0),
        y_values: Sequence[float] = (1.5, 3.0, 6.0),
        ball_radius: float = 0.1875, *,
        torus_half_period: float = math.pi, k_max: int = 4000,
        n_scan: int = 17, y_fix: Optional[float] = None,
        r_fix: Optional[float] = None) -> ExperimentResult:
    """Two slopes for band multipliers localized to a small metric ball.

    The input is restricted to the ball of the given radius around a foot at
    prime height y; the exact 1 -> 2 norm is then the maximum weighted column
    norm over feet inside the ball, scanned along the prime radius.  Fitted
    are the slope in R at fixed y (prediction (d2 + d1)(1/p - 1/2)) and the
    slope in y at fixed R (prediction gamma - d2 (1/p - 1/2)).  Every y must
    satisfy y > 4 ball_radius to keep the ball away from the degenerate axis.
    """
    d1, d2 = _check_dims(dims, [(2, 1)])
    _check_exact_exponent(p)
    _restriction_precondition(p, gamma, d2)
    radii = _increasing(radii, "radii")
    y_values = _increasing(y_values, "y_values")
    if ball_radius <= 0:
        raise DomainError("ball_radius must be positive")
    bad = [y for y in y_values if not y > 4.0 * ball_radius]
    if bad:
        raise DomainError(
            f"every ball center must satisfy y > 4 ball_radius = "
            f"{4 * ball_radius}; violated by y={bad[0]}")
    y_fix = float(y_values[len(y_values) // 2] if y_fix is None else y_fix)
    r_fix = float(radii[-1] if r_fix is None else r_fix)

    def ball_norm(radius: float, y: float) -> float:
        feet = np.linspace(y - ball_radius, y + ball_radius, n_scan)
        vals = weighted_column_norms(
            band_profile(radius), feet, gamma, torus_half_period,
            k_max=k_max, lambda_max=radius * radius)
        return float(vals.max())

    rows: List[list] = []
    norms_r = []
    for radius in radii:
        norm = ball_norm(radius, y_fix)
        norms_r.append(norm)
        rows.append(["radius", radius, y_fix, norm, "exact"])
    norms_y = []
    for y in y_values:
        norm = ball_norm(r_fix, y)
        norms_y.append(norm)
        rows.append(["height", r_fix, y, norm, "exact"])

    predicted_r = (d2 + d1) * (1.0 / p - 0.5)
    predicted_y = gamma - d2 * (1.0 / p - 0.5)
    report_r = ScalingReport.fit(radii, norms_r, predicted_r)
    report_y = ScalingReport.fit(y_values, norms_y, predicted_y)
    return ExperimentResult(
        kind="localized_restriction",
        header=["scan", "radius", "center_height", "norm", "certificate"],
        rows=rows,
        summary={
            "p": p, "gamma": gamma, "ball_radius": ball_radius,
            "y_fix": y_fix, "r_fix": r_fix,
            "predicted_slope_radius": predicted_r,
            "fitted_slope_radius": report_r.fitted_slope,
            "predicted_slope_height": predicted_y,
            "fitted_slope_height": report_y.fitted_slope,
            "report_radius": report_r.to_dict(),
            "report_height": report_y.to_dict(),
            "certificate": "exact",
        })


def bochner_riesz_sweep(
        dims=(2, 1), p: float = 1.0, deltas: Sequence[float] = (1.5, 0.2),
        radii: Sequence[float] = (4.0, 8.0, 16.0, 32.0, 64.0), *,
        torus_half_period: float = math.pi / 2.0,
        points_per_wavelength: float = 4.0) -> ExperimentResult:
    """Uniformity of (1 - L/R^2)_+^delta norms across R, per delta.

    The exact 1 -> 1 norm of each mean is the largest column L^1 norm; by
    symmetry the foot search reduces to prime radii, scanned over the
    candidates {0, 1/R, 4/R}.  The zero-frequency slab uses the closed-form
    planar kernel.  The summary reports max/min over R for each delta: a
    ratio near 1 indicates a uniformly bounded family, steady growth a
    divergent one.
    """
    _check_dims(dims, [(2, 1)])
    _check_exact_exponent(p)
    radii = _increasing(radii, "radii")
    deltas = [float(d) for d in deltas]
    if not deltas or any(d < 0 for d in deltas):
        raise DomainError("deltas must be non-negative")

    rows: List[list] = []
    ratios = {}
    for delta in deltas:
        per_radius = []
        for radius in radii:
            profile = MultiplierProfile(
                lambda lam, R=radius, d=delta:
                    np.maximum(0.0, 1.0 - np.asarray(lam) / (R * R)) ** d,
                (0.0, radius * radius))
            best, best_u = 0.0, 0.0
            for u in (0.0, 1.0 / radius, 4.0 / radius):
                val = l1_multiplier_norm(
                    profile, torus_half_period, u=u,
                    lambda_max=radius * radius,
                    points_per_wavelength=points_per_wavelength,
                    xi_zero_radial=lambda r, R=radius, d=delta:
                        bochner_riesz_radial_kernel(R, d, r))
                if val > best:
                    best, best_u = val, u
            per_radius.append(best)
            rows.append([delta, radius, best, best_u, "exact"])
        ratios[f"{delta:g}"] = max(per_radius) / min(per_radius)
    return ExperimentResult(
        kind="bochner_riesz",
        header=["delta", "radius", "norm", "maximizer_u", "certificate"],
        rows=rows,
        summary={"p": p, "ratios": ratios, "certificate": "exact"})


_PLANAR_EXTENT_FACTOR = 32.0  # kernel tail reach in units of sqrt(t)


def multiplier_norm_experiment(
        dims=(2, 1), p: float = 1.0,
        profile_fn: Optional[Callable] = None,
        sobolev_orders: Sequence[float] = (2.0,),
        t_values: Sequence[float] = tuple(2.0 ** k for k in range(-4, 5)), *,
        torus_half_period: float = math.pi / 2.0) -> ExperimentResult:
    """Ratios of dilated-multiplier norms to a fixed smoothness norm.

    For a profile F supported in [1/4, 1], the exact 1 -> 1 norm of F(t L) is
    measured across t; the summary reports, per Sobolev order s, the ratio
    norm / ||F||_{W_2^s} and its max/min across t, the uniformity indicator.
    Also recorded: the relative gap between computing one norm through the
    dilation F(t lambda) and through the equivalent band parameterization
    F(lambda / R^2) with R = t^{-1/2}; the two must agree to rounding.
    """
    _check_dims(dims, [(2, 1)])
    _check_exact_exponent(p)
    if profile_fn is None:
        profile_fn = CutoffSpec.standard().eta
    t_values = [float(t) for t in t_values]
    if not t_values or any(t <= 0 for t in t_values):
        raise DomainError("t_values must be positive")
    orders = [float(s) for s in sobolev_orders]
    if not orders:
        raise DomainError("need at least one Sobolev order")

    # support contract: F must live inside [1/4, 1]
    probe = np.concatenate([np.linspace(-1.0, 0.25, 100, endpoint=False),
                            np.linspace(1.0, 8.0, 200)[1:]])
    outside = float(np.max(np.abs(np.asarray(profile_fn(probe), dtype=float))))
    if outside > 1e-12:
        raise DomainError(
            f"profile must be supported in [1/4, 1]; |F| = {outside:.3e} outside")

    lam_s = np.linspace(-2.0, 3.0, 4001)
    samples = np.asarray(profile_fn(lam_s), dtype=float)
    sob = {s: sobolev_norm(samples, lam_s[1] - lam_s[0], s) for s in orders}

    dxi = math.pi / torus_half_period

    def norm_at(t: float) -> float:
        top = 1.0 / t
        profile = MultiplierProfile(
            lambda lam, t=t: np.asarray(profile_fn(t * np.asarray(lam))),
            (0.25 / t, 1.0 / t))
        extent = max(math.sqrt(top + 2.0 * dxi) / dxi + 4.0 / math.sqrt(dxi),
                     _PLANAR_EXTENT_FACTOR * math.sqrt(t))
        return max(l1_multiplier_norm(profile, torus_half_period, u=u,
                                      lambda_max=top, extent=extent)
                   for u in (0.0, math.sqrt(t), 2.0 * math.sqrt(t)))

    norms = {t: norm_at(t) for t in t_values}

    # same operator, two parameterizations: must agree to rounding
    t_mid = t_values[len(t_values) // 2]
    scale_mid = 1.0 / math.sqrt(t_mid)
    prof_band = MultiplierProfile(
        lambda lam: np.asarray(profile_fn(np.asarray(lam) / scale_mid ** 2)),
        (scale_mid ** 2 / 4.0, scale_mid ** 2))
    extent_mid = max(math.sqrt(1 / t_mid + 2 * dxi) / dxi + 4 / math.sqrt(dxi),
                     _PLANAR_EXTENT_FACTOR * math.sqrt(t_mid))
    via_band = l1_multiplier_norm(prof_band, torus_half_period, u=0.0,
                                  lambda_max=scale_mid ** 2, extent=extent_mid)
    via_dilation = l1_multiplier_norm(
        MultiplierProfile(
            lambda lam: np.asarray(profile_fn(t_mid * np.asarray(lam))),
            (0.25 / t_mid, 1.0 / t_mid)),
        torus_half_period, u=0.0, lambda_max=1.0 / t_mid, extent=extent_mid)
    denom = max(abs(via_dilation), 1e-300)
    consistency = abs(via_dilation - via_band) / denom

    rows: List[list] = []
    for t in t_values:
        for s in orders:
            ratio = norms[t] / sob[s] if sob[s] > 0 else 0.0
            rows.append([t, s, norms[t], sob[s], ratio, "exact"])
    vals = np.array([norms[t] for t in t_values])
    uniformity = float(vals.max() / vals.min()) if vals.min() > 0 else math.inf
    if vals.max() == 0.0:
        uniformity = 1.0  # zero profile: trivially uniform
    return ExperimentResult(
        kind="multiplier_norm",
        header=["t", "sobolev_order", "norm", "sobolev_norm", "ratio",
                "certificate"],
        rows=rows,
        summary={
            "p": p, "norm_max_over_min": uniformity,
            "dilation_consistency_rel": consistency,
            "sobolev_norms": {f"{s:g}": sob[s] for s in orders},
            "certificate": "exact",
        })


_HEAT_PRIME_OFFSETS = (0.0, 0.4, 0.8, 1.2, 1.6)
_HEAT_SECOND_OFFSETS = (0.0, 0.1, 0.2)
_HEAT_FOOT_HEIGHTS = (0.0, 0.6, 1.5)


def _default_heat_pairs(d1: int) -> List[Tuple[MetricPoint, MetricPoint]]:
    pairs = []
    for y1 in _HEAT_FOOT_HEIGHTS:
        y = MetricPoint((y1,) + (0.0,) * (d1 - 1), (0.0,))
        for dp in _HEAT_PRIME_OFFSETS:
            for ds in _HEAT_SECOND_OFFSETS:
                x = MetricPoint((y1 + dp,) + (0.0,) * (d1 - 1), (ds,))
                pairs.append((x, y))
    return pairs


def heat_gaussian_check(
        dims=(2, 1), times: Sequence[float] = (0.05, 0.1, 0.2),
        pairs: Optional[Sequence[Tuple[MetricPoint, MetricPoint]]] = None, *,
        torus_half_period: float = 12.0) -> ExperimentResult:
    """Gaussian-type decay of the heat kernel in the quasi-distance.

    Pools log(p_t(x, y) V_model(y, sqrt(t))) against rho(x, y)^2 / t over all
    pairs and times and fits a line: slope -b with b > 0 and a high R^2 are
    the Gaussian signature.  The default pairs mix prime-direction and
    second-layer offsets at three foot heights; the two-branch quasi-distance
    understates the control distance anisotropically, so heavily second-layer
    pair families lower R^2 by construction.  Also reported: the on-diagonal
    products p_t(y, y) V_model(y, sqrt(t)), whose spread across t and y is
    the two-sided comparability indicator.
    """
    d1, d2 = _check_dims(dims, [(1, 1), (2, 1), (3, 1)])
    times = [float(t) for t in times]
    if not times or any(t <= 0 for t in times):
        raise DomainError("times must be positive")
    if pairs is None:
        pairs = _default_heat_pairs(d1)
    if not pairs:
        raise DomainError("need at least one sample pair")
    for x, y in pairs:
        if x.d1 != d1 or y.d1 != d1 or x.d2 != 1 or y.d2 != 1:
            raise DomainError("pair dimensions do not match dims")
        if abs(x.x_second[0] - y.x_second[0]) > torus_half_period / 2.0:
            raise DomainError(
                "pair outside the aliasing-safe half of the torus")

    rows: List[list] = []
    abscissa, ordinate = [], []
    diag_vals = []
    min_kernel = math.inf
    max_kernel = 0.0
    for t in times:
        for x, y in pairs:
            rho = grushin_distance(x, y)
            p_val = heat_kernel_pointwise(
                (x.x_prime, x.x_second), (y.x_prime, y.x_second),
                t, torus_half_period)
            v_model = ball_volume_model(y, math.sqrt(t))
            min_kernel = min(min_kernel, p_val)
            max_kernel = max(max_kernel, p_val)
            log_pv = math.log(p_val * v_model) if p_val > 0 else -math.inf
            rows.append([t, y.prime_norm, rho, p_val, v_model, log_pv])
            if p_val > 0:
                abscissa.append(rho * rho / t)
                ordinate.append(log_pv)
            if rho == 0.0:
                diag_vals.append(p_val * v_model)
    if min_kernel < -1e-6 * max_kernel:
        raise ContractViolation(
            f"kernel value {min_kernel:.3e} negative beyond ripple tolerance")
    if len(abscissa) < 3:
        raise DomainError("too few usable pairs for a decay fit")

    a = np.asarray(abscissa)
    o = np.asarray(ordinate)
    design = np.stack([a, np.ones_like(a)], axis=1)
    coef, *_ = np.linalg.lstsq(design, o, rcond=None)
    fit = design @ coef
    ss_res = float(np.sum((o - fit) ** 2))
    ss_tot = float(np.sum((o - o.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    diag = np.asarray(diag_vals)
    return ExperimentResult(
        kind="heat_gaussian",
        header=["t", "foot_height", "rho", "kernel", "volume_model",
                "log_kernel_volume"],
        rows=rows,
        summary={
            "decay_rate_b": float(-coef[0]),
            "log_constant": float(coef[1]),
            "r_squared": r_squared,
            "n_points": int(a.size),
            "on_diag_min": float(diag.min()) if diag.size else math.nan,
            "on_diag_max": float(diag.max()) if diag.size else math.nan,
            "on_diag_ratio": float(diag.max() / diag.min()) if diag.size
            else math.nan,
            "min_kernel_value": float(min_kernel),
        })


def kernel_support_check(
        piece: PieceProfile, scale_time: float, *,
        prime_extent: float = 22.0, n_prime: int = 256,
        torus_half_period: float = 6.0, n_second: int = 128,
        k_max: int = 64, lambda_max: float = 64.0,
        kappas: Sequence[float] = (1.1, 1.5, 2.0)) -> ExperimentResult:
    """Column mass of a dyadic-piece multiplier outside its support radius.

    The piece at level l is a cosine combination with frequencies at most
    2^l, so the wave cone confines the kernel of piece(t sqrt(L)) within
    quasi-distance 2^l t of the column foot.  The engine column is computed
    under the given spectral truncation (the piece's slow spectral tail is
    part of the truncated object by construction) and the reported fractions
    are the relative L^2 mass beyond kappa times the support radius.
    """
    if scale_time <= 0:
        raise DomainError("scale_time must be positive")
    kappas = sorted(float(k) for k in kappas)
    if not kappas or kappas[0] <= 0:
        raise DomainError("kappas must be positive")
    support_radius = 2.0 ** piece.level * scale_time
    if support_radius ** 2 > 0.9 * torus_half_period:
        raise AliasingError(
            f"support radius {support_radius:g} reaches second-layer extent "
            f"{support_radius ** 2:g}, too large for torus half period "
            f"{torus_half_period:g}")

    grid = GrushinGrid(PrimeGrid(prime_extent, n_prime, 2),
                       torus_half_period, n_second, 1)
    trunc = SpectralTruncation(k_max=k_max, lambda_max=lambda_max)
    profile = MultiplierProfile(
        lambda lam: piece(scale_time * np.sqrt(np.maximum(lam, 0.0))),
        (0.0, np.inf))
    column = schwartz_kernel_column(profile, grid, (0.0, 0.0), (0.0,), trunc)
    mass = np.abs(column.values) ** 2
    total = float(mass.sum()) * grid.cell_volume
    rho = grushin_distance_field(grid, (0.0, 0.0), (0.0,), wrap=True)

    rows: List[list] = []
    fractions = {}
    for kappa in kappas:
        if total == 0.0:
            frac = 0.0
        else:
            frac = float(mass[rho > kappa * support_radius].sum()) \
                * grid.cell_volume / total
        fractions[f"{kappa:g}"] = frac
        rows.append([piece.level, scale_time, kappa, support_radius, frac])
    return ExperimentResult(
        kind="kernel_support",
        header=["level", "scale_time", "kappa", "support_radius",
                "fraction_outside"],
        rows=rows,
        summary={"level": piece.level, "scale_time": scale_time,
                 "total_mass": total, "fractions_outside": fractions,
                 "zero_kernel": total == 0.0})


_SUPPORT_LEVEL_TIMES = ((0, 1.0), (1, 1.0), (2, 0.5))


def kernel_support_suite(
        level_times: Sequence[Tuple[int, float]] = _SUPPORT_LEVEL_TIMES,
        **check_kwargs) -> ExperimentResult:
    """Run kernel_support_check over the frozen (level, time) pairs.

    The time shrinks with the level so that the support radius 2^l t stays
    well inside the torus while the spectral reach t sqrt(lambda_max) stays
    large enough that the truncated piece tail cannot pollute the fractions.
    """
    level_times = list(level_times)
    if not level_times:
        raise DomainError("need at least one (level, time) pair")
    n_levels = max(level for level, _ in level_times)
    cutoffs = CutoffSpec.standard()
    pieces = dyadic_pieces(cutoffs.eta, cutoffs, n_levels=max(n_levels, 1))
    rows: List[list] = []
    worst = {}
    header = None
    for level, t in level_times:
        if not 0 <= level < len(pieces):
            raise DomainError(f"no dyadic piece at level {level}")
        res = kernel_support_check(pieces[level], t, **check_kwargs)
        header = res.header
        rows.extend(res.rows)
        for kappa, frac in res.summary["fractions_outside"].items():
            worst[kappa] = max(worst.get(kappa, 0.0), frac)
    return ExperimentResult(
        kind="kernel_support",
        header=header,
        rows=rows,
        summary={"level_times": [[int(l), float(t)] for l, t in level_times],
                 "worst_fraction_outside": worst})


def geometry_suite(seed: int = 0, n_triples: int = 100000,
                   mc_samples: int = 1000000, dims=(2, 1)) -> ExperimentResult:
    """Bundle of quasi-metric measure checks at fixed dimensions.

    Four parts: exact equality of the two quasi-distance branches on the
    interface; the empirical quasi-triangle constant over random triples;
    Monte-Carlo ball volumes against the model r^{d1+d2} max(r, |x'|)^{d2}
    (two-sided comparability constant); and doubling ratios against the
    homogeneous-dimension growth (1 + lambda)^Q.
    """
    d1, d2 = _check_dims(dims, [(2, 1)])
    if n_triples < 1 or mc_samples < 1:
        raise DomainError("sample budgets must be positive")
    q_hom = d1 + 2 * d2
    rng = np.random.default_rng(seed)
    rows: List[list] = []

    # branch interface: graded and rooted forms agree exactly when
    # sqrt(ds) == ax + ay and both are exactly representable
    interface_gap = 0.0
    for s in (0.5, 1.0, 1.5, 2.0, 3.0, 4.0):
        for ax, ay in ((s / 2.0, s / 2.0), (0.0, s)):
            x = MetricPoint((ax,) + (0.0,) * (d1 - 1), (0.0,))
            y = MetricPoint((ay,) + (0.0,) * (d1 - 1), (s * s,))
            dp = abs(ax - ay)
            graded = dp + (s * s) / s
            rooted = dp + math.sqrt(s * s)
            gap = abs(graded - rooted)
            via_fn = grushin_distance(x, y)
            gap = max(gap, abs(via_fn - graded))
            interface_gap = max(interface_gap, gap)
            rows.append(["interface", s, ax, gap])

    xp = rng.uniform(-3.0, 3.0, (n_triples, 3, d1))
    xs = rng.uniform(-4.0, 4.0, (n_triples, 3, d2))
    d_xy = grushin_distance_arrays(xp[:, 0], xs[:, 0], xp[:, 1], xs[:, 1])
    d_yz = grushin_distance_arrays(xp[:, 1], xs[:, 1], xp[:, 2], xs[:, 2])
    d_xz = grushin_distance_arrays(xp[:, 0], xs[:, 0], xp[:, 2], xs[:, 2])
    denom = d_xy + d_yz
    ok = denom > 0
    triangle_constant = float(np.max(d_xz[ok] / denom[ok]))
    rows.append(["quasi_triangle", float(n_triples), 0.0, triangle_constant])

    comparability = 0.0
    for height in (0.0, 0.5, 2.0):
        center = MetricPoint((height,) + (0.0,) * (d1 - 1), (0.0,))
        for radius in (0.25, 1.0, 3.0):
            vol, _stderr = ball_volume_mc(center, radius, mc_samples,
                                          seed=seed)
            model = ball_volume_model(center, radius)
            two_sided = max(vol / model, model / vol)
            comparability = max(comparability, two_sided)
            rows.append(["volume", height, radius, two_sided])

    doubling_excess = 0.0
    for height in (0.0, 1.0):
        center = MetricPoint((height,) + (0.0,) * (d1 - 1), (0.0,))
        for radius in (0.5, 1.0):
            for lam in (2.0, 4.0, 8.0):
                ratio = doubling_ratio(center, radius, lam,
                                       n_samples=mc_samples, seed=seed)
                excess = ratio / (1.0 + lam) ** q_hom
                doubling_excess = max(doubling_excess, excess)
                rows.append(["doubling", height, lam, excess])

    return ExperimentResult(
        kind="geometry_suite",
        header=["check", "param_a", "param_b", "value"],
        rows=rows,
        summary={
            "interface_max_gap": interface_gap,
            "triangle_constant": triangle_constant,
            "volume_comparability": comparability,
            "doubling_excess": doubling_excess,
            "homogeneous_dimension": q_hom,
            "seed": seed,
        })


def distance_table(pairs) -> ExperimentResult:
    """Quasi-distance for a list of point pairs ((x', x''), (y', y''))."""
    pairs = list(pairs)
    if not pairs:
        raise DomainError("need at least one point pair")
    rows: List[list] = []
    for raw_x, raw_y in pairs:
        x = MetricPoint(tuple(raw_x[0]), tuple(raw_x[1]))
        y = MetricPoint(tuple(raw_y[0]), tuple(raw_y[1]))
        rows.append([str(x.x_prime), str(x.x_second), str(y.x_prime),
                     str(y.x_second), grushin_distance(x, y)])
    return ExperimentResult(
        kind="distance_table",
        header=["x_prime", "x_second", "y_prime", "y_second", "rho"],
        rows=rows,
        summary={"n_pairs": len(rows)})
