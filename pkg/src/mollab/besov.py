"""Discrete translation-difference Besov semi-norms and scaling exponents.

The continuum sup over shifts is replaced by a max over dyadic
grid-aligned shifts (per axis, plus diagonals in 2D). Power sums go
through math.fsum, so difference norms are invariant under grid
translations of the input to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .grid import Field, _resolve_exponent

__all__ = [
    "BesovParams", "BesovEstimate", "SpacetimeBesovEstimate",
    "dyadic_space_shifts", "fit_shift_window", "translation_difference_norm",
    "besov_seminorm_space", "besov_seminorm_spacetime", "holder_exponent_fit",
]


@dataclass(frozen=True)
class BesovParams:
    """Smoothness/integrability exponents; beta/p add the temporal scale."""
    alpha: float
    q: float
    beta: Optional[float] = None
    p: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.beta is not None and self.beta < self.alpha:
            raise ValueError("temporal exponent beta must be >= alpha")


@dataclass
class BesovEstimate:
    seminorm: float
    worst_shift: Optional[Tuple[int, ...]]
    fitted_alpha: Optional[float]
    shift_set: list
    distances: np.ndarray
    norms: np.ndarray
    r2: Optional[float] = None
    flag: Optional[str] = None

    def pairs(self):
        """(distance, difference norm) rows for CSV export."""
        return list(zip(self.distances.tolist(), self.norms.tolist()))


@dataclass
class SpacetimeBesovEstimate:
    temporal: BesovEstimate
    spatial: BesovEstimate


def dyadic_space_shifts(grid, max_frac: float = 0.25,
                        min_cells: int = 1) -> list:
    """Dyadic per-axis shifts (and 2D diagonals) with |y| <= max_frac*length."""
    shifts = []
    m = min_cells
    while m * grid.dx <= max_frac * grid.length + 1e-12:
        if grid.d == 1:
            shifts.append((m,))
        else:
            shifts.append((m, 0))
            shifts.append((0, m))
            if m * grid.dx * math.sqrt(2.0) <= max_frac * grid.length + 1e-12:
                shifts.append((m, m))
        m *= 2
    return shifts


def fit_shift_window(grid) -> list:
    """Dyadic shifts inside the scaling window [4*dx, length/8]."""
    out = []
    for s in dyadic_space_shifts(grid, max_frac=0.125, min_cells=4):
        if _shift_distance(s, grid.dx) >= 4 * grid.dx - 1e-12:
            out.append(s)
    return out


def _shift_distance(shift_cells: Sequence[int], dx: float) -> float:
    return dx * math.sqrt(sum(int(c) ** 2 for c in shift_cells))


def _pow_sum_norm(diff_mag: np.ndarray, q: float, weight: float) -> float:
    if math.isinf(q):
        return float(np.max(diff_mag))
    s = math.fsum(np.power(diff_mag, q).ravel().tolist())
    return (weight * s) ** (1.0 / q)


def translation_difference_norm(field: Field, shift_cells, q) -> float:
    """L^q norm of f(. - y) - f for a grid-aligned shift y (space axes)."""
    q = _resolve_exponent(q)
    d = field.grid.d
    shift_cells = tuple(int(c) for c in shift_cells)
    if len(shift_cells) != d:
        raise ValueError(f"shift needs {d} components")
    axes = tuple(range(field.data.ndim - 1 - d, field.data.ndim - 1))
    shifted = np.roll(field.data, shift_cells, axis=axes)
    diff = shifted - field.data
    if field.components == 1:
        mag = np.abs(diff[..., 0])
    else:
        mag = np.sqrt(np.sum(diff * diff, axis=-1))
    weight = field.grid.dx ** d
    if field.grid.has_time:
        weight *= field.grid.dt
    return _pow_sum_norm(mag, q, weight)


def _loglog_fit(distances, norms):
    """Least squares slope of log(norm) vs log(distance); returns
    (slope, intercept, r2) or None when under-determined."""
    x = np.log(np.asarray(distances, dtype=np.float64))
    y = np.log(np.asarray(norms, dtype=np.float64))
    if len(np.unique(x)) < 2:
        return None
    slope, intercept = np.polyfit(x, y, 1)
    yhat = slope * x + intercept
    sstot = float(np.sum((y - y.mean()) ** 2))
    ssres = float(np.sum((y - yhat) ** 2))
    r2 = 1.0 if sstot == 0.0 else 1.0 - ssres / sstot
    return float(slope), float(intercept), r2


def _validate_shift_set(field, shift_set):
    if shift_set is None:
        shift_set = dyadic_space_shifts(field.grid)
    shift_set = [tuple(int(c) for c in s) for s in shift_set]
    if not shift_set:
        raise ValueError("shift set must be nonempty")
    for s in shift_set:
        dist = _shift_distance(s, field.grid.dx)
        if dist == 0.0:
            raise ValueError("zero shift not allowed")
        if dist > field.grid.length / 4.0 + 1e-12:
            raise ValueError(f"shift {s} exceeds length/4")
    return shift_set


def besov_seminorm_space(field: Field, alpha: float, q,
                         shift_set=None) -> BesovEstimate:
    """max over shifts of |y|^(-alpha) * ||f(.-y) - f||_{L^q}, plus the
    log-log slope fitted over the same shifts."""
    if field.grid.has_time:
        raise ValueError("use besov_seminorm_spacetime for fields with a time axis")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    shift_set = _validate_shift_set(field, shift_set)
    dists = np.array([_shift_distance(s, field.grid.dx) for s in shift_set])
    norms = np.array([translation_difference_norm(field, s, q) for s in shift_set])

    scaled = np.array([d ** (-alpha) * v for d, v in zip(dists, norms)])
    best = int(np.argmax(scaled))
    seminorm = float(scaled[best])

    nz = norms > 0.0
    if not np.any(nz):
        return BesovEstimate(0.0, None, None, shift_set, dists, norms,
                             flag="no_scaling")
    fit = _loglog_fit(dists[nz], norms[nz])
    fitted_alpha, r2 = (None, None) if fit is None else (fit[0], fit[2])
    return BesovEstimate(seminorm, shift_set[best], fitted_alpha,
                         shift_set, dists, norms, r2=r2)


@dataclass
class HolderFit:
    alpha_hat: Optional[float]
    slope: Optional[float]
    r2: Optional[float]
    distances: np.ndarray
    norms: np.ndarray
    flag: Optional[str] = None


def holder_exponent_fit(field: Field, q, shifts=None) -> HolderFit:
    """Scaling exponent of the translation differences over dyadic shifts
    in [4*dx, length/8]; the slope is clamped to [0, 1] and flagged when it
    lands outside."""
    if shifts is None:
        shifts = fit_shift_window(field.grid)
    dists = np.array([_shift_distance(s, field.grid.dx) for s in shifts])
    norms = np.array([translation_difference_norm(field, s, q) for s in shifts])
    nz = norms > 0.0
    if not np.any(nz):
        return HolderFit(None, None, None, dists, norms, flag="no_scaling")
    fit = _loglog_fit(dists[nz], norms[nz])
    if fit is None:
        return HolderFit(None, None, None, dists, norms, flag="no_scaling")
    slope, _, r2 = fit
    flag = None
    alpha_hat = slope
    if slope < 0.0:
        alpha_hat, flag = 0.0, "clamped_low"
    elif slope > 1.0:
        alpha_hat, flag = 1.0, "clamped_high"
    return HolderFit(alpha_hat, slope, r2, dists, norms, flag)


def _time_difference_norm(field: Field, s: int, p: float, q: float) -> float:
    """Mixed L^p(L^q) norm of f(t - s*dt, x) - f(t, x)."""
    d = field.grid.d
    data = field.data
    if field.time_periodic:
        diff = np.roll(data, s, axis=0) - data
    else:
        diff = data[:-s] - data[s:]
        if diff.shape[0] == 0:
            raise ValueError(f"time shift {s} leaves no overlap")
    if field.components == 1:
        mag = np.abs(diff[..., 0])
    else:
        mag = np.sqrt(np.sum(diff * diff, axis=-1))
    space_axes = tuple(range(1, 1 + d))
    wq = field.grid.dx ** d
    if math.isinf(q):
        sq = np.max(mag, axis=space_axes)
    else:
        sq = (wq * np.sum(mag ** q, axis=space_axes)) ** (1.0 / q)
    if math.isinf(p):
        return float(np.max(sq))
    return float((field.grid.dt * np.sum(sq ** p)) ** (1.0 / p))


def _space_difference_norm_mixed(field: Field, shift_cells, p: float,
                                 q: float) -> float:
    d = field.grid.d
    axes = tuple(range(1, 1 + d))
    shifted = np.roll(field.data, tuple(int(c) for c in shift_cells), axis=axes)
    diff = shifted - field.data
    if field.components == 1:
        mag = np.abs(diff[..., 0])
    else:
        mag = np.sqrt(np.sum(diff * diff, axis=-1))
    wq = field.grid.dx ** d
    if math.isinf(q):
        sq = np.max(mag, axis=axes)
    else:
        sq = (wq * np.sum(mag ** q, axis=axes)) ** (1.0 / q)
    if math.isinf(p):
        return float(np.max(sq))
    return float((field.grid.dt * np.sum(sq ** p)) ** (1.0 / p))


def _estimate_from(dists, norms, shifts, exponent):
    nz = norms > 0.0
    if not np.any(nz):
        return BesovEstimate(0.0, None, None, shifts, dists, norms,
                             flag="no_scaling")
    scaled = dists ** (-exponent) * norms
    best = int(np.argmax(scaled))
    fit = _loglog_fit(dists[nz], norms[nz])
    fitted, r2 = (None, None) if fit is None else (fit[0], fit[2])
    return BesovEstimate(float(scaled[best]), shifts[best], fitted,
                         shifts, dists, norms, r2=r2)


def besov_seminorm_spacetime(field: Field, beta: float, p, alpha: float, q,
                             time_shifts=None,
                             space_shifts=None) -> SpacetimeBesovEstimate:
    """Temporal exponent from time-shift differences (L^p over time of the
    spatial L^q norm) and spatial exponent from space-shift differences;
    returns both fits."""
    if not field.grid.has_time:
        raise ValueError("field needs a time axis")
    p = _resolve_exponent(p)
    q = _resolve_exponent(q)
    if time_shifts is None:
        time_shifts = []
        s = 1
        lim = field.grid.nt // (8 if field.time_periodic else 4)
        while s <= max(lim, 1):
            time_shifts.append(s)
            s *= 2
    if space_shifts is None:
        space_shifts = dyadic_space_shifts(field.grid)

    tdists = np.array([s * field.grid.dt for s in time_shifts])
    tnorms = np.array([_time_difference_norm(field, s, p, q)
                       for s in time_shifts])
    temporal = _estimate_from(tdists, tnorms, list(time_shifts), beta)

    sdists = np.array([_shift_distance(s, field.grid.dx) for s in space_shifts])
    snorms = np.array([_space_difference_norm_mixed(field, s, p, q)
                       for s in space_shifts])
    spatial = _estimate_from(sdists, snorms, [tuple(s) for s in space_shifts],
                             alpha)
    return SpacetimeBesovEstimate(temporal=temporal, spatial=spatial)
