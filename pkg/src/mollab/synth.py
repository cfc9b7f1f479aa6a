"""Synthetic field generators.

Covers every field class the experiments need: constants, single Fourier
modes, random-phase fields with a prescribed scaling exponent, sharp
indicator/two-state profiles with jumps on cell boundaries, smooth
vacuum-touching bumps, and sums/products/separable combinations.

generate() is a pure function of (grid, spec, seed): repeated calls are
byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .grid import Field, Grid

__all__ = [
    "Constant", "FourierMode", "Holder", "Indicator", "TwoState",
    "VacuumBump", "Sum", "Product", "Separable", "FieldSpec", "generate",
]


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class FourierMode:
    """amplitude * sin(2*pi*(k . x)/length + phase); k is an int (1D) or pair."""
    k: Union[int, Tuple[int, int]]
    amplitude: float = 1.0
    phase: float = 0.0


@dataclass(frozen=True)
class Holder:
    """Random-phase Fourier series with spectrum |k|^(-alpha - d/2).

    The translation-difference scaling of the samples matches alpha (the
    constant in front is not controlled). `modes` defaults to n/2 - 1.
    A spec-level seed overrides the seed passed to generate().
    """
    alpha: float
    modes: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class Indicator:
    """1 on [a, b), 0 elsewhere; put a and b on cell boundaries for exact
    translation-difference laws."""
    interval: Tuple[float, float] = (0.0, 0.5)


@dataclass(frozen=True)
class TwoState:
    """left for x < jump, right for x >= jump (second jump at the wrap)."""
    left: float
    right: float
    jump: float = 0.5


@dataclass(frozen=True)
class VacuumBump:
    """floor + amplitude * exp(1 - 1/(1 - s^2)) with s = (x-center)/width.

    Smooth, compactly supported, min = floor >= 0.
    """
    floor: float = 0.0
    center: float = 0.5
    width: float = 0.25
    amplitude: float = 1.0

    def __post_init__(self):
        if self.floor < 0:
            raise ValueError("floor must be nonnegative")
        if self.width <= 0:
            raise ValueError("width must be positive")


@dataclass(frozen=True)
class Sum:
    parts: tuple


@dataclass(frozen=True)
class Product:
    parts: tuple


@dataclass(frozen=True)
class Separable:
    """time_spec(t) * space_spec(x) on a space-time grid."""
    time: "FieldSpec"
    space: "FieldSpec"


FieldSpec = Union[Constant, FourierMode, Holder, Indicator, TwoState,
                  VacuumBump, Sum, Product, Separable]


def _holder_1d(n: int, length: float, alpha: float, modes: int,
               rng: np.random.Generator) -> np.ndarray:
    k = np.arange(1, modes + 1)
    amp = k ** (-alpha - 0.5)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=modes)
    spec = np.zeros(n // 2 + 1, dtype=np.complex128)
    spec[1:modes + 1] = 0.5 * n * amp * np.exp(1j * theta)
    return np.fft.irfft(spec, n)


def _holder_2d(n: int, length: float, alpha: float, modes: int,
               rng: np.random.Generator) -> np.ndarray:
    k0 = np.fft.fftfreq(n, d=1.0 / n)
    k1 = np.fft.rfftfreq(n, d=1.0 / n)
    kk = np.sqrt(k0[:, None] ** 2 + k1[None, :] ** 2)
    active = (kk > 0) & (kk <= modes)
    amp = np.zeros_like(kk)
    amp[active] = kk[active] ** (-alpha - 1.0)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=kk.shape)
    spec = 0.5 * n * n * amp * np.exp(1j * theta)
    # rows with self-conjugate columns must stay Hermitian for a real field
    for col in (0, n // 2):
        spec[1:, col] = 0.5 * (spec[1:, col] + np.conj(spec[1:, col][::-1]))
        spec[0, col] = spec[0, col].real
    return np.fft.irfft2(spec, s=(n, n))


def _axis_coords(n: int, step: float) -> np.ndarray:
    return np.arange(n) * step


def _eval_1d(spec: FieldSpec, n: int, step: float, period: float,
             rng: np.random.Generator) -> np.ndarray:
    """Evaluate a spec on a single periodic axis (used for time factors)."""
    x = _axis_coords(n, step)
    if isinstance(spec, Constant):
        return np.full(n, float(spec.value))
    if isinstance(spec, FourierMode):
        if isinstance(spec.k, tuple):
            if len(spec.k) != 1:
                raise ValueError("vector mode index on a one-dimensional axis")
            k = spec.k[0]
        else:
            k = spec.k
        return spec.amplitude * np.sin(2.0 * np.pi * k * x / period + spec.phase)
    if isinstance(spec, Holder):
        modes = spec.modes if spec.modes is not None else n // 2 - 1
        r = np.random.default_rng(spec.seed) if spec.seed is not None else rng
        return _holder_1d(n, period, spec.alpha, modes, r)
    if isinstance(spec, Indicator):
        a, b = spec.interval
        return ((x >= a) & (x < b)).astype(np.float64)
    if isinstance(spec, TwoState):
        return np.where(x < spec.jump, spec.left, spec.right).astype(np.float64)
    if isinstance(spec, VacuumBump):
        s = (x - spec.center) / spec.width
        out = np.full(n, spec.floor)
        core = np.abs(s) < 1.0
        out[core] += spec.amplitude * np.exp(1.0 - 1.0 / (1.0 - s[core] ** 2))
        return out
    if isinstance(spec, Sum):
        return sum(_eval_1d(p, n, step, period, rng) for p in spec.parts)
    if isinstance(spec, Product):
        out = np.ones(n)
        for p in spec.parts:
            out = out * _eval_1d(p, n, step, period, rng)
        return out
    raise ValueError(f"spec {type(spec).__name__} not usable on a single axis")


def _eval_space(spec: FieldSpec, grid: Grid, rng: np.random.Generator) -> np.ndarray:
    if grid.d == 1:
        return _eval_1d(spec, grid.n, grid.dx, grid.length, rng)
    n = grid.n
    x = _axis_coords(n, grid.dx)
    if isinstance(spec, Constant):
        return np.full((n, n), float(spec.value))
    if isinstance(spec, FourierMode):
        k = spec.k if isinstance(spec.k, tuple) else (spec.k, 0)
        phase = 2.0 * np.pi * (k[0] * x[:, None] + k[1] * x[None, :]) / grid.length
        return spec.amplitude * np.sin(phase + spec.phase)
    if isinstance(spec, Holder):
        modes = spec.modes if spec.modes is not None else n // 2 - 1
        r = np.random.default_rng(spec.seed) if spec.seed is not None else rng
        return _holder_2d(n, grid.length, spec.alpha, modes, r)
    if isinstance(spec, Indicator):
        a, b = spec.interval
        stripe = ((x >= a) & (x < b)).astype(np.float64)
        return np.broadcast_to(stripe[:, None], (n, n)).copy()
    if isinstance(spec, TwoState):
        stripe = np.where(x < spec.jump, spec.left, spec.right).astype(np.float64)
        return np.broadcast_to(stripe[:, None], (n, n)).copy()
    if isinstance(spec, VacuumBump):
        xx = x[:, None] - spec.center
        yy = x[None, :] - spec.center
        s2 = (xx ** 2 + yy ** 2) / spec.width ** 2
        out = np.full((n, n), spec.floor)
        core = s2 < 1.0
        out[core] += spec.amplitude * np.exp(1.0 - 1.0 / (1.0 - s2[core]))
        return out
    if isinstance(spec, Sum):
        return sum(_eval_space(p, grid, rng) for p in spec.parts)
    if isinstance(spec, Product):
        out = np.ones((n, n))
        for p in spec.parts:
            out = out * _eval_space(p, grid, rng)
        return out
    raise ValueError(f"cannot evaluate {type(spec).__name__} on space axes")


def generate(grid: Grid, spec, seed: int = 0, time_periodic: bool = False) -> Field:
    """Sample a spec on a grid. Deterministic in (grid, spec, seed).

    On a space-time grid, plain specs are constant in time; use Separable
    to prescribe a time factor. A tuple/list of specs gives one channel per
    entry.
    """
    if isinstance(spec, (tuple, list)):
        rng = np.random.default_rng(seed)
        chans = [_generate_array(grid, s, rng) for s in spec]
        data = np.stack(chans, axis=-1)
        return Field(grid, data, components=len(chans),
                     time_periodic=time_periodic and grid.has_time)
    rng = np.random.default_rng(seed)
    data = _generate_array(grid, spec, rng)
    return Field(grid, data, time_periodic=time_periodic and grid.has_time)


def _generate_array(grid: Grid, spec, rng: np.random.Generator) -> np.ndarray:
    if isinstance(spec, Separable):
        if not grid.has_time:
            raise ValueError("Separable spec needs a grid with a time axis")
        tfac = _eval_1d(spec.time, grid.nt, grid.dt, grid.t_end, rng)
        sfac = _eval_space(spec.space, grid, rng)
        return tfac.reshape((-1,) + (1,) * grid.d) * sfac
    space = _eval_space(spec, grid, rng)
    if grid.has_time:
        return np.broadcast_to(space, (grid.nt,) + space.shape).copy()
    return space
