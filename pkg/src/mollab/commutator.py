"""Mollification commutators and their decay rates in the scale epsilon.

Two quantities:
  product commutator   (fg)^eps - f^eps g^eps        (smallness ~ eps^(a1+a2))
  derivative commutator D[(fg)^eps] - D[f g^eps]     (controlled by Df, vanishes)

The product commutator satisfies the exact algebraic identity
  (fg)^eps - f^eps g^eps = G - (f - f^eps)(g - g^eps)
with G the double-difference integral against the kernel; cet_split_check
evaluates both sides independently (G by direct summation over the kernel
support) and returns the max-norm residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels as kern
from .besov import _loglog_fit
from .grid import Field, mixed_norm
from .mollify import Mollifier, mollify_space, mollify_spacetime, spectral_derivative

__all__ = [
    "CommutatorReport", "RateFit", "cet_commutator", "cet_split_check",
    "lions_commutator", "rate_fit", "commutator_sweep",
]


@dataclass
class RateFit:
    slope: Optional[float]
    intercept: Optional[float]
    r2: Optional[float]
    n_used: int
    dropped_zeros: int = 0
    flag: Optional[str] = None


@dataclass
class CommutatorReport:
    kind: str                 # 'cet' or 'lions'
    epsilons: np.ndarray      # strictly decreasing
    norms: np.ndarray
    norm_params: tuple        # (p, q)
    fit: RateFit
    field_tags: tuple = ()

    @property
    def fitted_slope(self):
        return self.fit.slope

    def pairs(self):
        return list(zip(self.epsilons.tolist(), self.norms.tolist()))


def _check_pair(f: Field, g: Field):
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    if f.components != 1 or g.components != 1:
        raise ValueError("commutators are implemented for scalar fields")
    if f.time_periodic != g.time_periodic:
        raise ValueError("mixed time-periodicity")


def _mollify(field: Field, epsilon: float, mode: str) -> Field:
    if mode == "space":
        return mollify_space(field, epsilon)
    if mode == "spacetime":
        return mollify_spacetime(field, epsilon)
    raise ValueError(f"unknown mode {mode!r}")


def cet_commutator(f: Field, g: Field, epsilon: float, mode: str = "space") -> Field:
    """(fg)^eps - f^eps g^eps, with space-only or space-time smoothing."""
    _check_pair(f, g)
    if mode == "spacetime" and not f.grid.has_time:
        raise ValueError("spacetime mode needs fields with a time axis")
    prod = Field(f.grid, f.values() * g.values(), time_periodic=f.time_periodic)
    pe = _mollify(prod, epsilon, mode)
    fe = _mollify(f, epsilon, mode)
    ge = _mollify(g, epsilon, mode)
    return Field(pe.grid, pe.values() - fe.values() * ge.values(),
                 time_periodic=pe.time_periodic)


def cet_split_check(f: Field, g: Field, epsilon: float,
                    mode: str = "space") -> float:
    """Max-norm residual between the commutator and its split form
    G - (f - f^eps)(g - g^eps), with G evaluated by direct double-difference
    summation over the kernel support (the independent second path)."""
    _check_pair(f, g)
    lhs = cet_commutator(f, g, epsilon, mode)

    fv, gv = f.values(), g.values()
    if mode == "space":
        if f.grid.has_time:
            raise ValueError("space-mode split check expects space-only fields")
        mol = Mollifier.space(f.grid, epsilon)
        if f.grid.d == 1:
            G = kern.cet_g1(np.ascontiguousarray(fv), np.ascontiguousarray(gv),
                            mol.weights, np.ascontiguousarray(mol.offsets[:, 0]))
        else:
            G = kern.cet_g2(np.ascontiguousarray(fv), np.ascontiguousarray(gv),
                            mol.weights,
                            np.ascontiguousarray(mol.offsets[:, 0]),
                            np.ascontiguousarray(mol.offsets[:, 1]))
        fe = mollify_space(f, epsilon).values()
        ge = mollify_space(g, epsilon).values()
        rhs = G - (fv - fe) * (gv - ge)
    elif mode == "spacetime":
        if f.grid.d != 1:
            raise ValueError("spacetime split check is implemented for d=1")
        mol = Mollifier.spacetime(f.grid, epsilon)
        fe_f = mollify_spacetime(f, epsilon)
        ge_f = mollify_spacetime(g, epsilon)
        if f.time_periodic:
            t0, t1 = 0, f.grid.nt
            fv_c, gv_c = fv, gv
        else:
            kt = int(np.max(np.abs(mol.offsets[:, 0])))
            t0, t1 = kt, f.grid.nt - kt
            fv_c, gv_c = fv[t0:t1], gv[t0:t1]
        G = kern.cet_g_st1(np.ascontiguousarray(fv), np.ascontiguousarray(gv),
                           mol.weights,
                           np.ascontiguousarray(mol.offsets[:, 0]),
                           np.ascontiguousarray(mol.offsets[:, 1]),
                           f.time_periodic, t0, t1)
        rhs = G - (fv_c - fe_f.values()) * (gv_c - ge_f.values())
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return float(np.max(np.abs(lhs.values() - rhs)))


def _derivative(field: Field, axis) -> Field:
    """Spectral derivative along a space axis, centered difference in time."""
    grid = field.grid
    if axis in ("t", "time"):
        if not grid.has_time:
            raise ValueError("time derivative requested on a space-only field")
        if not field.time_periodic:
            raise ValueError("time derivative needs a time-periodic field")
        data = (np.roll(field.data, -1, axis=0) - np.roll(field.data, 1, axis=0))
        out = data / (2.0 * grid.dt)
        return Field(grid, out, field.components, field.time_periodic)
    ax = {"x": 0, "y": 1}.get(axis, axis)
    if not isinstance(ax, int) or not 0 <= ax < grid.d:
        raise ValueError(f"bad derivative axis {axis!r}")
    arr_axis = (1 if grid.has_time else 0) + ax
    out = spectral_derivative(field.data, grid.dx, arr_axis)
    return Field(grid, out, field.components, field.time_periodic)


def lions_commutator(f: Field, g: Field, epsilon: float,
                     derivative_axis="x") -> Field:
    """D[(fg)^eps] - D[f g^eps] for a partial derivative D in space or time.

    Fields with a time axis are smoothed in space-time (time-periodic
    synthetics only), space-only fields in space.
    """
    _check_pair(f, g)
    mode = "spacetime" if f.grid.has_time else "space"
    if mode == "spacetime" and not f.time_periodic:
        raise ValueError("lions_commutator needs time-periodic fields when a "
                         "time axis is present")
    prod = Field(f.grid, f.values() * g.values(), time_periodic=f.time_periodic)
    pe = _mollify(prod, epsilon, mode)
    ge = _mollify(g, epsilon, mode)
    fge = Field(pe.grid, f.values() * ge.values(), time_periodic=pe.time_periodic)
    d1 = _derivative(pe, derivative_axis)
    d2 = _derivative(fge, derivative_axis)
    return Field(pe.grid, d1.values() - d2.values(),
                 time_periodic=pe.time_periodic)


def rate_fit(epsilons: Sequence[float], norms: Sequence[float]) -> RateFit:
    """Least squares of log(norm) on log(eps); exact zeros are dropped and
    counted, fewer than 3 surviving points flags the fit."""
    eps = np.asarray(list(epsilons), dtype=np.float64)
    nrm = np.asarray(list(norms), dtype=np.float64)
    if eps.shape != nrm.shape:
        raise ValueError("epsilons and norms must have equal length")
    if np.any(nrm < 0.0):
        raise ValueError("norms must be nonnegative")
    keep = nrm > 0.0
    dropped = int(np.sum(~keep))
    if int(np.sum(keep)) < 3:
        flag = "all_zero" if dropped == len(nrm) else "insufficient_points"
        return RateFit(None, None, None, int(np.sum(keep)), dropped, flag)
    fit = _loglog_fit(eps[keep], nrm[keep])
    if fit is None:
        return RateFit(None, None, None, int(np.sum(keep)), dropped,
                       "degenerate_abscissae")
    slope, intercept, r2 = fit
    return RateFit(slope, intercept, r2, int(np.sum(keep)), dropped)


def commutator_sweep(f: Field, g: Field, epsilons: Sequence[float],
                     kind: str = "cet", p=math.inf, q=2.0,
                     mode: str = "space", derivative_axis="x",
                     field_tags: tuple = ()) -> CommutatorReport:
    """Mixed L^p(L^q) norms of the commutator over a decreasing eps sweep,
    with the fitted log-log slope."""
    eps = np.asarray(list(epsilons), dtype=np.float64)
    if len(eps) >= 2 and not np.all(np.diff(eps) < 0):
        raise ValueError("epsilons must be strictly decreasing")
    norms = []
    for e in eps:
        if kind == "cet":
            c = cet_commutator(f, g, float(e), mode=mode)
        elif kind == "lions":
            c = lions_commutator(f, g, float(e), derivative_axis=derivative_axis)
        else:
            raise ValueError(f"unknown commutator kind {kind!r}")
        norms.append(mixed_norm(c, p, q))
    norms = np.asarray(norms)
    return CommutatorReport(kind, eps, norms, (p, q), rate_fit(eps, norms),
                            field_tags=tuple(field_tags))
