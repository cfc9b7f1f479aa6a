"""Uniform periodic grids and sampled fields.

Everything lives on the torus [0, length)^d, optionally extended by a
uniformly sampled time axis. A Field stores real samples indexed
(t?, x1, ..., xd, channel) and is frozen after construction; operations
return new Fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = ["Grid", "Field", "make_grid", "lp_norm", "mixed_norm"]


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """d spatial axes of n points each, optional time axis of nt samples.

    Samples sit at j*dx (and t0 + j*dt); the rectangle rule on them is the
    exact quadrature for trigonometric polynomials below Nyquist.
    """

    d: int
    n: int
    length: float = 1.0
    nt: Optional[int] = None
    t_end: Optional[float] = None
    t0: float = 0.0  # start of the time window (nonzero after interior restriction)

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError(f"spatial dimension must be 1 or 2, got {self.d}")
        if self.n < 8 or not _is_pow2(self.n):
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")
        if (self.nt is None) != (self.t_end is None):
            raise ValueError("nt and t_end must be supplied together")
        if self.nt is not None:
            if self.nt < 2:
                raise ValueError(f"nt must be >= 2, got {self.nt}")
            if not self.t_end > 0:
                raise ValueError(f"t_end must be positive, got {self.t_end}")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def dt(self) -> float:
        if self.nt is None:
            raise ValueError("grid has no time axis")
        return self.t_end / self.nt

    @property
    def has_time(self) -> bool:
        return self.nt is not None

    @property
    def space_shape(self) -> tuple:
        return (self.n,) * self.d

    @property
    def shape(self) -> tuple:
        return ((self.nt,) if self.has_time else ()) + self.space_shape

    def x(self) -> np.ndarray:
        """Sample coordinates along one spatial axis."""
        return np.arange(self.n) * self.dx

    def t(self) -> np.ndarray:
        if not self.has_time:
            raise ValueError("grid has no time axis")
        return self.t0 + np.arange(self.nt) * self.dt

    def space_only(self) -> "Grid":
        return Grid(self.d, self.n, self.length)

    def with_time_window(self, nt: int, t0: float) -> "Grid":
        return Grid(self.d, self.n, self.length, nt=nt, t_end=nt * self.dt, t0=t0)


def make_grid(d: int, n: int, length: float = 1.0,
              nt: Optional[int] = None, t_end: Optional[float] = None) -> Grid:
    """Validated Grid constructor (see Grid for the invariants)."""
    return Grid(d=d, n=n, length=length, nt=nt, t_end=t_end)


class Field:
    """Real samples of a scalar or vector function on a Grid.

    The data array is shaped grid.shape + (components,) and made read-only.
    time_periodic marks synthetic fields whose time axis wraps like the
    spatial ones.
    """

    def __init__(self, grid: Grid, data, components: int = 1,
                 time_periodic: bool = False, _validate: bool = True):
        data = np.asarray(data, dtype=np.float64)
        if data.shape == grid.shape:
            if components != 1:
                raise ValueError("channel axis missing for a vector field")
            data = data[..., np.newaxis]
        expected = grid.shape + (components,)
        if data.shape != expected:
            raise ValueError(f"data shape {data.shape} != expected {expected}")
        if _validate and not np.all(np.isfinite(data)):
            raise ValueError("field contains non-finite samples")
        if time_periodic and not grid.has_time:
            raise ValueError("time_periodic requires a time axis")
        data = np.ascontiguousarray(data)
        data.setflags(write=False)
        self.grid = grid
        self.components = components
        self.data = data
        self.time_periodic = bool(time_periodic)

    def values(self) -> np.ndarray:
        """Channel-squeezed read-only view (scalar fields only)."""
        if self.components != 1:
            raise ValueError("values() is for scalar fields")
        return self.data[..., 0]

    def magnitude(self) -> np.ndarray:
        """Pointwise Euclidean magnitude over channels."""
        if self.components == 1:
            return np.abs(self.data[..., 0])
        return np.sqrt(np.sum(self.data * self.data, axis=-1))

    def replace(self, data) -> "Field":
        return Field(self.grid, data, self.components, self.time_periodic)

    def __repr__(self):
        t = f", nt={self.grid.nt}" if self.grid.has_time else ""
        return (f"Field(d={self.grid.d}, n={self.grid.n}{t}, "
                f"components={self.components})")


def _resolve_exponent(r) -> float:
    if isinstance(r, str):
        if r == "inf":
            return math.inf
        r = float(r)
    r = float(r)
    if math.isnan(r) or r < 1:
        raise ValueError(f"integrability exponent must be >= 1, got {r}")
    return r


def lp_norm(field: Field, r) -> float:
    """L^r norm over the whole sample set by the rectangle rule.

    r = inf is the sample maximum of the pointwise magnitude.
    """
    r = _resolve_exponent(r)
    mag = field.magnitude()
    if math.isinf(r):
        return float(np.max(mag))
    w = field.grid.dx ** field.grid.d
    if field.grid.has_time:
        w *= field.grid.dt
    return float((w * np.sum(mag ** r)) ** (1.0 / r))


def _space_norms(field: Field, q: float) -> np.ndarray:
    """Space L^q norm per time slice (or a single value for space-only)."""
    mag = field.magnitude()
    d = field.grid.d
    axes = tuple(range(-d, 0))
    if math.isinf(q):
        return np.max(mag, axis=axes)
    w = field.grid.dx ** d
    return (w * np.sum(mag ** q, axis=axes)) ** (1.0 / q)


def mixed_norm(field: Field, p, q) -> float:
    """Time-L^p of the space-L^q norm, both by the rectangle rule.

    For a space-only field this reduces to the plain spatial L^q norm.
    """
    p = _resolve_exponent(p)
    q = _resolve_exponent(q)
    sq = _space_norms(field, q)
    if not field.grid.has_time:
        return float(sq)
    if math.isinf(p):
        return float(np.max(sq))
    return float((field.grid.dt * np.sum(sq ** p)) ** (1.0 / p))
