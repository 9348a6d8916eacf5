"""Scale-space post-processing of transform magnitudes.

Builds |T|(scale, shear) grids over a dyadic scale ladder, normalizes each
scale row, follows modulus maxima from coarse to fine scales, fits decay
exponents in log-log coordinates, and runs the sequential coefficient
search (position, then slope, then curvature, ...).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NonPositiveMagnitude, TrackLost
from .quadrature import QuadratureConfig
from .scene import FeasibleScene
from .taylorlet import TaylorletSpec
from .transform import build_plans, cell_value

__all__ = [
    "ScaleGrid",
    "MaximaTrack",
    "DecayEstimate",
    "DetectGridConfig",
    "StageResult",
    "DetectionResult",
    "default_scales",
    "default_axis",
    "build_scale_grid",
    "normalize_per_scale",
    "find_local_maxima",
    "track_maxima",
    "estimate_decay",
    "detect_coefficients",
    "export_grid_csv",
    "export_track_csv",
]

# Desk-scale defaults: dyadic ladder 2^-2 .. 2^-12 and 150-point shear axes.
DEFAULT_LOG2_RANGE = (2.0, 12.0)
DEFAULT_AXIS_POINTS = 150
DEFAULT_AXIS_RANGES = {0: (-2.0, 2.0), 1: (-1.0, 1.0), 2: (-2.0, 2.0)}
DEFAULT_TRACK_WINDOW_STEPS = 10.0
DEFAULT_FIT_DROP = (2, 2)


def default_scales(log2_min: float = DEFAULT_LOG2_RANGE[0],
                   log2_max: float = DEFAULT_LOG2_RANGE[1],
                   count: int | None = None) -> np.ndarray:
    """Descending scale ladder a = 2^-i, log-uniform between the endpoints."""
    if count is None:
        count = int(round(log2_max - log2_min)) + 1
    return 2.0 ** (-np.linspace(log2_min, log2_max, count))


def default_axis(index: int, count: int = DEFAULT_AXIS_POINTS) -> np.ndarray:
    lo, hi = DEFAULT_AXIS_RANGES.get(index, (-2.0, 2.0))
    return np.linspace(lo, hi, count)


@dataclass(frozen=True)
class ScaleGrid:
    """|T| magnitudes over (scale, shear) for one varying shear index."""

    scales: np.ndarray          # descending a values, coarsest first
    axis: np.ndarray            # values of the varying shear coordinate
    values: np.ndarray          # shape (len(scales), len(axis)), >= 0
    axis_index: int = 0
    normalized: bool = False
    degenerate_rows: tuple[int, ...] = ()

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(self.scales), len(self.axis)):
            raise ValueError("grid shape does not match scales x axis")
        if (v < 0).any():
            raise ValueError("grid stores magnitudes; negative entry found")

    @property
    def axis_step(self) -> float:
        return float(self.axis[1] - self.axis[0]) if len(self.axis) > 1 else 0.0


@dataclass(frozen=True)
class MaximaTrack:
    """Per-scale tracked maximum position/magnitude, coarse to fine."""

    scales: np.ndarray
    positions: np.ndarray
    magnitudes: np.ndarray
    converged: bool
    converged_estimate: float
    lost_at: int | None = None


@dataclass(frozen=True)
class DecayEstimate:
    """Least-squares slope of log2|T| against log2 a."""

    slope: float
    intercept: float
    r_squared: float
    fit_range: tuple[int, ...]


@dataclass(frozen=True)
class DetectGridConfig:
    """Grid geometry and tracking knobs for the coefficient search."""

    scales: np.ndarray = field(default_factory=default_scales)
    axes: dict = field(default_factory=dict)       # stage index -> axis array
    window_steps: float = DEFAULT_TRACK_WINDOW_STEPS
    fit_drop: tuple[int, int] = DEFAULT_FIT_DROP
    workers: int = 1
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)

    def axis_for(self, index: int) -> np.ndarray:
        ax = self.axes.get(index)
        return np.asarray(ax, dtype=float) if ax is not None else default_axis(index)


@dataclass(frozen=True)
class StageResult:
    index: int
    axis: np.ndarray
    seed: float
    track: MaximaTrack
    estimate: float
    decay: DecayEstimate | None


@dataclass(frozen=True)
class DetectionResult:
    estimates: tuple[float, ...]
    stages: tuple[StageResult, ...]


def build_scale_grid(scene: FeasibleScene, spec: TaylorletSpec, alpha: float,
                     n: int, t: float, scales, axis, axis_index: int,
                     fixed_shears=None, cfg: QuadratureConfig | None = None,
                     workers: int = 1, clip_domain: bool = True) -> ScaleGrid:
    """Evaluate |T| on a (scales x axis) grid, varying one shear coordinate.

    Rows (scales) are evaluated in parallel worker threads; the compiled
    kernel releases the GIL so this scales with cores.  Cell order within a
    row is fixed, keeping output deterministic.
    """
    cfg = cfg or QuadratureConfig()
    scales = np.asarray(scales, dtype=float)
    axis = np.asarray(axis, dtype=float)
    plans = build_plans(scene, spec)
    base = list(fixed_shears) if fixed_shears is not None else [0.0] * (n + 1)
    if len(base) != n + 1:
        raise ValueError(f"fixed_shears needs n+1 = {n + 1} entries")

    def row(a: float) -> np.ndarray:
        s = list(base)
        out = np.empty(len(axis))
        for col, shear in enumerate(axis):
            s[axis_index] = float(shear)
            out[col] = abs(cell_value(plans, float(a), alpha, t, s, cfg, clip_domain))
        return out

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, scales))
    else:
        rows = [row(a) for a in scales]
    return ScaleGrid(scales=scales, axis=axis, values=np.vstack(rows),
                     axis_index=axis_index)


def normalize_per_scale(grid: ScaleGrid) -> ScaleGrid:
    """Divide each scale row by its maximum; all-zero rows are flagged."""
    values = grid.values.copy()
    degenerate = []
    for i, row in enumerate(values):
        top = row.max()
        if top > 0:
            values[i] = row / top
        else:
            degenerate.append(i)
    return replace(grid, values=values, normalized=True,
                   degenerate_rows=tuple(degenerate))


def _local_maxima(row: np.ndarray, axis: np.ndarray):
    """Interior maxima as (index, refined position, magnitude) triples.

    Plateaus of equal values count once, attributed to their left edge (the
    smaller-shear convention); isolated peaks get 3-point parabolic
    refinement, which keeps the vertex inside the center cell.
    """
    out = []
    n = len(row)
    i = 1
    while i < n - 1:
        if row[i] > row[i - 1]:
            k = i
            while k + 1 < n and row[k + 1] == row[i]:
                k += 1
            if k > i:
                # Plateau i..k above its left neighbor; a maximum if it
                # also drops on the right, reported at the left edge.
                if k < n - 1 and row[i] > row[k + 1]:
                    out.append((i, float(axis[i]), float(row[i])))
                i = k
            elif row[i] > row[i + 1]:
                vm, v0, vp = row[i - 1], row[i], row[i + 1]
                denom = vm - 2.0 * v0 + vp
                delta = 0.0 if denom == 0 else 0.5 * (vm - vp) / denom
                delta = min(0.5, max(-0.5, delta))
                step = axis[i + 1] - axis[i]
                out.append((i, float(axis[i] + delta * step), float(v0)))
        i += 1
    return out


def find_local_maxima(row, axis) -> list[float]:
    """Positions of interior local maxima with sub-grid refinement."""
    row = np.asarray(row, dtype=float)
    axis = np.asarray(axis, dtype=float)
    if len(row) < 3:
        raise ValueError("need at least 3 samples to find interior maxima")
    return [pos for _, pos, _ in _local_maxima(row, axis)]


def track_maxima(grid: ScaleGrid, seed_position: float, window: float) -> MaximaTrack:
    """Follow the local maximum nearest the previous position, coarse to fine.

    The track stops early (converged False, lost_at set) when no maximum
    lies within +-window of the previous position.  Convergence means the
    full ladder was tracked and the last three positions agree to within
    twice the axis step.
    """
    positions, magnitudes = [], []
    prev = float(seed_position)
    lost_at = None
    for i in range(len(grid.scales)):
        cands = _local_maxima(grid.values[i], grid.axis)
        best = None
        for _, pos, mag in cands:
            d = abs(pos - prev)
            if d <= window and (best is None or d < best[0] - 1e-15):
                best = (d, pos, mag)
        if best is None:
            lost_at = i
            break
        positions.append(best[1])
        magnitudes.append(best[2])
        prev = best[1]
    positions = np.asarray(positions)
    magnitudes = np.asarray(magnitudes)
    converged = False
    if lost_at is None and len(positions) >= 3:
        tail = positions[-3:]
        converged = bool((tail.max() - tail.min()) < 2.0 * grid.axis_step)
    estimate = float(positions[-1]) if len(positions) else math.nan
    return MaximaTrack(
        scales=grid.scales[: len(positions)],
        positions=positions,
        magnitudes=magnitudes,
        converged=converged,
        converged_estimate=estimate,
        lost_at=lost_at,
    )


def estimate_decay(scales, magnitudes, fit_range=None) -> DecayEstimate:
    """Slope of log2|T| vs log2 a over the fit range (>= 4 scales).

    `fit_range` is an index sequence; by default the 2 coarsest and 2
    finest scales are dropped (pre-asymptotic bias and quadrature noise).
    """
    scales = np.asarray(scales, dtype=float)
    magnitudes = np.asarray(magnitudes, dtype=float)
    if fit_range is None:
        lo, hi = DEFAULT_FIT_DROP
        fit_range = range(lo, len(scales) - hi)
    idx = np.asarray(list(fit_range), dtype=int)
    if len(idx) < 4:
        raise ValueError("decay fit needs at least 4 scales")
    mags = magnitudes[idx]
    if (mags <= 0).any():
        raise NonPositiveMagnitude("magnitudes must be positive on the fit range")
    x = np.log2(scales[idx])
    y = np.log2(mags)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - float((resid ** 2).sum()) / ss_tot
    return DecayEstimate(slope=float(slope), intercept=float(intercept),
                         r_squared=r2, fit_range=tuple(int(i) for i in idx))


def _stage_decay(plans, alpha, t, shears, grid_cfg: DetectGridConfig,
                 scales) -> DecayEstimate | None:
    """Decay diagnostic along the scale ladder at a fixed shear vector.

    Scales whose magnitude underflows to zero are excluded before fitting;
    returns None when fewer than 4 usable scales remain.
    """
    mags = np.array([
        abs(cell_value(plans, float(a), alpha, t, shears, grid_cfg.quadrature))
        for a in scales
    ])
    lo, hi = grid_cfg.fit_drop
    idx = [i for i in range(lo, len(scales) - hi) if mags[i] > 0]
    if len(idx) < 4:
        return None
    return estimate_decay(scales, mags, idx)


def detect_coefficients(scene: FeasibleScene, spec: TaylorletSpec, alpha: float,
                        t: float, n: int,
                        grid_config: DetectGridConfig | None = None) -> DetectionResult:
    """Sequential search for the first n+1 Taylor coefficients of q at t.

    Stage l sweeps shear l with lower coefficients pinned to their
    estimates and higher ones at zero, then follows the modulus maxima of
    the normalized grid from the coarsest-scale global maximum down the
    ladder.  Raises TrackLost (with the stage index) if a track dies.
    """
    cfg = grid_config or DetectGridConfig()
    plans = build_plans(scene, spec)
    estimates: list[float] = []
    stages: list[StageResult] = []
    for ell in range(n + 1):
        axis = cfg.axis_for(ell)
        fixed = estimates + [0.0] * (n + 1 - ell)
        grid = build_scale_grid(
            scene, spec, alpha, n, t, cfg.scales, axis, axis_index=ell,
            fixed_shears=fixed, cfg=cfg.quadrature, workers=cfg.workers,
        )
        norm = normalize_per_scale(grid)
        seed = float(axis[int(np.argmax(norm.values[0]))])
        window = cfg.window_steps * norm.axis_step
        track = track_maxima(norm, seed, window)
        if track.lost_at is not None:
            raise TrackLost(
                f"maxima track lost at scale index {track.lost_at} in stage {ell}",
                stage=ell, track=track,
            )
        est = track.converged_estimate
        shears = fixed.copy()
        shears[ell] = est
        decay = _stage_decay(plans, alpha, t, shears, cfg, np.asarray(cfg.scales))
        stages.append(StageResult(index=ell, axis=axis, seed=seed, track=track,
                                  estimate=est, decay=decay))
        estimates.append(est)
    return DetectionResult(estimates=tuple(estimates), stages=tuple(stages))


def export_grid_csv(grid: ScaleGrid, fh) -> None:
    """CSV rows log2a,shear,value,normalized_value (raw grid expected)."""
    norm = grid if grid.normalized else normalize_per_scale(grid)
    raw = grid.values
    fh.write("log2a,shear,value,normalized_value\n")
    for i, a in enumerate(grid.scales):
        la = math.log2(a)
        for jcol, shear in enumerate(grid.axis):
            fh.write(f"{la:.17g},{shear:.17g},{raw[i, jcol]:.17g},"
                     f"{norm.values[i, jcol]:.17g}\n")


def export_track_csv(track: MaximaTrack, fh) -> None:
    fh.write("log2a,position,magnitude\n")
    for a, pos, mag in zip(track.scales, track.positions, track.magnitudes):
        fh.write(f"{math.log2(a):.17g},{pos:.17g},{mag:.17g}\n")
