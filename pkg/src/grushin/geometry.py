"""Quasi-distance, ball volumes, doubling ratios, and separated nets.

The anisotropic dilation structure (x', x'') -> (t x', t^2 x'') induces a
two-branch quasi-distance: near the degenerate set {x' = 0} the second layer
costs a square root, away from it the cost is graded by 1/(|x'| + |y'|).  All
geometric quantities here are comparability representatives: constants are
always fitted by the consumer, never asserted as exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import ContractViolation, DegenerateInputError, DomainError
from .fields import Field, GrushinGrid


@dataclass(frozen=True)
class MetricPoint:
    """A point x = (x', x'') of the product space."""

    x_prime: Tuple[float, ...]
    x_second: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x_prime", tuple(float(v) for v in self.x_prime))
        object.__setattr__(self, "x_second", tuple(float(v) for v in self.x_second))
        if not all(math.isfinite(v) for v in self.x_prime + self.x_second):
            raise DomainError("metric point has non-finite coordinates")

    @property
    def d1(self) -> int:
        return len(self.x_prime)

    @property
    def d2(self) -> int:
        return len(self.x_second)

    @property
    def prime_norm(self) -> float:
        return math.hypot(*self.x_prime) if self.d1 > 1 else abs(self.x_prime[0])


def _rho_from_parts(dp: np.ndarray, ds: np.ndarray, ax: np.ndarray,
                    ay: np.ndarray) -> np.ndarray:
    """Two-branch quasi-distance from precomputed norms.

    dp = |x'-y'|, ds = |x''-y''|, ax = |x'|, ay = |y'|.  The branches agree on
    the interface sqrt(ds) = ax + ay, where both give dp + sqrt(ds).
    """
    sq = np.sqrt(ds)
    denom = ax + ay
    safe = np.where(denom > 0, denom, 1.0)
    graded = dp + ds / safe
    rooted = dp + sq
    return np.where(sq <= denom, np.where(denom > 0, graded, dp), rooted)


def grushin_distance(x: MetricPoint, y: MetricPoint) -> float:
    """The explicit two-branch representative of the control distance."""
    if x.d1 != y.d1 or x.d2 != y.d2:
        raise ContractViolation(
            f"dimension mismatch: ({x.d1},{x.d2}) vs ({y.d1},{y.d2})")
    dp = math.dist(x.x_prime, y.x_prime)
    ds = math.dist(x.x_second, y.x_second)
    return float(_rho_from_parts(np.float64(dp), np.float64(ds),
                                 np.float64(x.prime_norm), np.float64(y.prime_norm)))


def grushin_distance_arrays(x_prime: np.ndarray, x_second: np.ndarray,
                            y_prime: np.ndarray, y_second: np.ndarray) -> np.ndarray:
    """Vectorized quasi-distance; the last axis of each input is the coordinate
    axis, leading axes broadcast."""
    x_prime = np.asarray(x_prime, dtype=float)
    y_prime = np.asarray(y_prime, dtype=float)
    x_second = np.asarray(x_second, dtype=float)
    y_second = np.asarray(y_second, dtype=float)
    dp = np.linalg.norm(x_prime - y_prime, axis=-1)
    ds = np.linalg.norm(x_second - y_second, axis=-1)
    ax = np.linalg.norm(x_prime, axis=-1)
    ay = np.linalg.norm(y_prime, axis=-1)
    return _rho_from_parts(dp, ds, ax, ay)


def torus_wrap(delta: np.ndarray, half_period: float) -> np.ndarray:
    """Minimal-image representative of a difference on [-S, S) per axis."""
    span = 2.0 * half_period
    return (np.asarray(delta) + half_period) % span - half_period


def grushin_distance_field(grid: GrushinGrid, y_prime, y_second,
                           wrap: bool = True) -> np.ndarray:
    """Distance from every grid node to y, shaped like the grid.

    With wrap=True the second-layer difference is taken on the torus
    (minimal image per axis), matching the periodic discretization.
    """
    y_prime = np.atleast_1d(np.asarray(y_prime, dtype=float))
    y_second = np.atleast_1d(np.asarray(y_second, dtype=float))
    if y_prime.shape != (grid.prime.d1,) or y_second.shape != (grid.d2,):
        raise ContractViolation("point has wrong dimensions for this grid")
    xp = np.stack(grid.meshgrid_prime(), axis=-1)
    dp = np.linalg.norm(xp - y_prime, axis=-1)
    ax = np.linalg.norm(xp, axis=-1)
    xs = np.stack(grid.meshgrid_second(), axis=-1)
    dsec = xs - y_second
    if wrap:
        dsec = torus_wrap(dsec, grid.torus_half_period)
    ds = np.linalg.norm(dsec, axis=-1)
    shape_p = dp.shape + (1,) * grid.d2
    shape_s = (1,) * grid.prime.d1 + ds.shape
    return _rho_from_parts(dp.reshape(shape_p), ds.reshape(shape_s),
                           ax.reshape(shape_p), np.float64(np.linalg.norm(y_prime)))


def ball_volume_model(x: MetricPoint, r: float) -> float:
    """Comparability representative r^{d1+d2} max{r, |x'|}^{d2}."""
    if r <= 0:
        raise DomainError("radius must be positive")
    return r ** (x.d1 + x.d2) * max(r, x.prime_norm) ** x.d2


_N_SHARDS = 16  # fixed so results do not depend on worker count


def ball_volume_mc(x: MetricPoint, r: float, n_samples: int = 1_000_000,
                   seed: int = 0) -> Tuple[float, float]:
    """Hit-or-miss Monte-Carlo ball volume; returns (volume, stderr).

    The sampling box contains the ball: |z' - x'| <= r forces every prime
    coordinate within r, and the branch dichotomy bounds |z'' - x''| by
    max(r^2, r (2|x'| + r)).  Samples are drawn in a fixed number of
    deterministic shards so the result is reproducible regardless of any
    parallel scheduling.
    """
    if r <= 0:
        raise DomainError("radius must be positive")
    if n_samples <= 0:
        raise DegenerateInputError("Monte-Carlo sample budget must be positive")
    d1, d2 = x.d1, x.d2
    a = max(r * r, r * (2.0 * x.prime_norm + r))
    box_vol = (2.0 * r) ** d1 * (2.0 * a) ** d2
    xp = np.asarray(x.x_prime)
    xs = np.asarray(x.x_second)
    per = int(np.ceil(n_samples / _N_SHARDS))
    hits = 0
    total = 0
    for child in np.random.SeedSequence(seed).spawn(_N_SHARDS):
        rng = np.random.default_rng(child)
        zp = xp + rng.uniform(-r, r, size=(per, d1))
        zs = xs + rng.uniform(-a, a, size=(per, d2))
        rho = grushin_distance_arrays(zp, zs, xp, xs)
        hits += int(np.count_nonzero(rho <= r))
        total += per
    p = hits / total
    vol = box_vol * p
    stderr = box_vol * math.sqrt(max(p * (1.0 - p), 1.0 / total) / total)
    return vol, stderr


def doubling_ratio(x: MetricPoint, r: float, lam: float,
                   n_samples: int = 1_000_000, seed: int = 0) -> float:
    """Measured |B(x, lam r)| / |B(x, r)| by Monte Carlo."""
    if lam < 1:
        raise DomainError("doubling factor must be >= 1")
    big, _ = ball_volume_mc(x, lam * r, n_samples, seed=seed * 2 + 1)
    small, _ = ball_volume_mc(x, r, n_samples, seed=seed * 2 + 2)
    return big / small


@dataclass
class NetResult:
    """Greedy separated net over a finite point family, with its partition.

    centers[i] are net points; assignment[j] gives, for domain point j, the
    index of the first center within r/10 (scan order), so the induced cells
    are the closed r/10 balls with earlier cells removed: disjoint, exhaustive,
    each inside its center's closed r/10 ball.
    """

    centers: List[MetricPoint]
    points: np.ndarray           # (n, d1+d2) domain points, scan order
    assignment: np.ndarray       # (n,) index into centers
    r: float
    d1: int
    overlap_constant: int        # K = sup_i #{j : rho(x_i, x_j) <= 2r}

    @property
    def cell_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=len(self.centers))

    def to_json(self) -> str:
        return json.dumps({
            "r": self.r,
            "separation": self.r / 10.0,
            "overlap_constant": self.overlap_constant,
            "n_points": int(self.points.shape[0]),
            "cell_sizes": self.cell_sizes.tolist(),
            "centers": [{"x_prime": c.x_prime, "x_second": c.x_second}
                        for c in self.centers],
        }, indent=1)


def _point_rows(points: np.ndarray, d1: int):
    return points[:, :d1], points[:, d1:]


def build_net(grid: GrushinGrid, r: float, stride: int = 1,
              prime_bounds: Tuple[float, float] | None = None,
              second_bounds: Tuple[float, float] | None = None) -> NetResult:
    """Greedy maximal r/10-separated net over (strided) grid nodes.

    The domain is the set of grid nodes inside the optional per-layer bounding
    boxes (closed intervals applied to every axis of that layer).  Scan order
    is C order over the strided mesh, so the construction is deterministic.
    Maximality makes the net r/10-covering, and every point is assigned to the
    first center within r/10.
    """
    if r <= 0:
        raise DomainError("radius must be positive")
    if stride < 1:
        raise DomainError("stride must be >= 1")

    def _clip(axis: np.ndarray, bounds) -> np.ndarray:
        if bounds is None:
            return axis
        lo, hi = bounds
        return axis[(axis >= lo) & (axis <= hi)]

    axes = [_clip(grid.prime.axis[::stride], prime_bounds)] * grid.prime.d1 \
        + [_clip(grid.second_axis[::stride], second_bounds)] * grid.d2
    if any(a.size == 0 for a in axes):
        raise DegenerateInputError("net domain is empty")
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    d1 = grid.prime.d1
    sep = r / 10.0

    pp, ps = _point_rows(points, d1)
    center_idx: List[int] = []
    cp = np.empty((0, d1))
    cs = np.empty((0, points.shape[1] - d1))
    for j in range(points.shape[0]):
        if center_idx:
            rho = grushin_distance_arrays(cp, cs, pp[j], ps[j])
            if np.min(rho) <= sep:
                continue
        center_idx.append(j)
        cp = np.vstack([cp, pp[j:j + 1]])
        cs = np.vstack([cs, ps[j:j + 1]])

    # assignment: first center within sep, in center scan order
    n = points.shape[0]
    assignment = np.full(n, -1, dtype=int)
    block = max(1, 2_000_000 // max(len(center_idx), 1))
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        rho = grushin_distance_arrays(pp[lo:hi, None, :], ps[lo:hi, None, :],
                                      cp[None, :, :], cs[None, :, :])
        mask = rho <= sep
        assignment[lo:hi] = np.argmax(mask, axis=1)
        if not np.all(mask.any(axis=1)):
            raise ContractViolation("net is not covering; greedy invariant broken")

    rho_cc = grushin_distance_arrays(cp[:, None, :], cs[:, None, :],
                                     cp[None, :, :], cs[None, :, :])
    overlap = int(np.max(np.sum(rho_cc <= 2.0 * r, axis=1)))

    centers = [MetricPoint(tuple(cp[i]), tuple(cs[i])) for i in range(len(center_idx))]
    return NetResult(centers=centers, points=points, assignment=assignment,
                     r=r, d1=d1, overlap_constant=overlap)


def ball_projection(f: Field, y: MetricPoint, r: float) -> Field:
    """Multiplication by the indicator of the open quasi-ball around y."""
    if r <= 0:
        raise DomainError("radius must be positive")
    rho = grushin_distance_field(f.grid, y.x_prime, y.x_second, wrap=True)
    return Field(f.grid, np.where(rho < r, f.values, 0.0))
