"""1D isentropic compressible flow on the periodic torus.

Conservative finite volumes: minmod-limited linear reconstruction, local
Lax-Friedrichs or HLL fluxes, SSP-RK2 in time. The pressure law is
pi(rho) = kappa * rho^gamma with kappa = (gamma-1)^2 / (4*gamma), so the
total energy integrand is rho*v^2/2 + kappa*rho^gamma/(gamma-1).

Flux differences telescope, so discrete mass and momentum are conserved to
round-off every step; the scheme's numerical dissipation makes the energy
nonincreasing, the desk-scale analog of the admissibility inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as kern
from .grid import Field, Grid
from .synth import generate

__all__ = [
    "PressureLaw", "EulerState", "SimConfig", "Trajectory", "SolverError",
    "pressure", "sound_speed", "energy", "step", "simulate",
    "VACUUM_RELATIVE_THRESHOLD",
]

# cells with rho below this fraction of max(rho) carry zero velocity
VACUUM_RELATIVE_THRESHOLD = 1e-12


class SolverError(RuntimeError):
    """Raised when a run goes non-finite or violates its CFL budget."""


@dataclass(frozen=True)
class PressureLaw:
    """pi(rho) = kappa * rho^gamma with the coupled coefficient
    kappa = (gamma-1)^2 / (4*gamma)."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")

    @property
    def kappa(self) -> float:
        g = self.gamma
        return (g - 1.0) ** 2 / (4.0 * g)


def _as_array(rho):
    arr = rho.values() if isinstance(rho, Field) else np.asarray(rho, dtype=np.float64)
    if np.any(arr < 0.0):
        raise ValueError("negative density")
    return arr


def _wrap_like(template, arr):
    if isinstance(template, Field):
        return Field(template.grid, arr, time_periodic=template.time_periodic)
    return arr


def pressure(rho, law: PressureLaw):
    """Pointwise kappa * rho^gamma; vacuum cells give 0."""
    arr = _as_array(rho)
    return _wrap_like(rho, law.kappa * np.power(arr, law.gamma))


def sound_speed(rho, law: PressureLaw):
    """c = sqrt(pi'(rho)) = sqrt(gamma * kappa * rho^(gamma-1))."""
    arr = _as_array(rho)
    return _wrap_like(rho, np.sqrt(law.gamma * law.kappa *
                                   np.power(arr, law.gamma - 1.0)))


@dataclass
class EulerState:
    """Conservative variables (rho, m = rho*v) at one instant."""

    grid: Grid
    rho: np.ndarray
    m: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        if self.grid.d != 1 or self.grid.has_time:
            raise ValueError("solver states live on 1D space-only grids")
        self.rho = np.ascontiguousarray(self.rho, dtype=np.float64)
        self.m = np.ascontiguousarray(self.m, dtype=np.float64)
        if self.rho.shape != (self.grid.n,) or self.m.shape != (self.grid.n,):
            raise ValueError("state arrays must have shape (n,)")
        if not (np.all(np.isfinite(self.rho)) and np.all(np.isfinite(self.m))):
            raise ValueError("non-finite state")
        if np.any(self.rho < 0.0):
            raise ValueError("negative density")
        vac = VACUUM_RELATIVE_THRESHOLD * (self.rho.max() if self.rho.size else 0.0)
        if np.any((self.rho <= vac) & (self.m != 0.0)):
            raise ValueError("vacuum cells must carry zero momentum")

    def velocity(self) -> np.ndarray:
        v = np.zeros_like(self.rho)
        vac = VACUUM_RELATIVE_THRESHOLD * self.rho.max()
        np.divide(self.m, self.rho, out=v, where=self.rho > vac)
        return v

    @classmethod
    def from_specs(cls, grid: Grid, rho_spec, v_spec, seed: int = 0,
                   time: float = 0.0) -> "EulerState":
        rho = generate(grid, rho_spec, seed=seed).values().copy()
        v = generate(grid, v_spec, seed=seed + 1).values().copy()
        vac = VACUUM_RELATIVE_THRESHOLD * (rho.max() if rho.size else 0.0)
        v[rho <= vac] = 0.0  # velocity is 0 on vacuum by convention
        return cls(grid, rho, rho * v, time=time)


def energy(state: EulerState, law: PressureLaw) -> float:
    """Total energy: integral of m^2/(2*rho) + kappa*rho^gamma/(gamma-1),
    with vacuum cells contributing nothing to the kinetic part."""
    vac = VACUUM_RELATIVE_THRESHOLD * (state.rho.max() if state.rho.size else 0.0)
    kin = np.zeros_like(state.rho)
    np.divide(state.m * state.m, 2.0 * state.rho, out=kin, where=state.rho > vac)
    internal = law.kappa * np.power(state.rho, law.gamma) / (law.gamma - 1.0)
    return float(state.grid.dx * np.sum(kin + internal))


@dataclass
class SimConfig:
    grid: Grid
    pressure: PressureLaw
    ic_rho: object                 # FieldSpec for rho(0)
    ic_v: object                   # FieldSpec for v(0)
    t_end: float
    cfl: float = 0.4
    flux: str = "llf"              # 'llf' or 'hll'
    limiter_order: int = 2         # 1 = piecewise constant, 2 = minmod MUSCL
    snapshot_every: int = 1
    density_floor: float = 0.0
    fixed_dt: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.cfl < 1.0:
            raise ValueError(f"cfl must lie in (0, 1), got {self.cfl}")
        if not self.t_end > 0.0:
            raise ValueError("t_end must be positive")
        if self.flux not in ("llf", "hll"):
            raise ValueError(f"unknown flux {self.flux!r}")
        if self.limiter_order not in (1, 2):
            raise ValueError("limiter_order must be 1 or 2")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")
        if self.density_floor < 0.0:
            raise ValueError("density_floor must be nonnegative")


def _apply_floors(rho: np.ndarray, m: np.ndarray, floor: float):
    if floor > 0.0:
        np.maximum(rho, floor, out=rho)
    else:
        np.maximum(rho, 0.0, out=rho)
    vac = VACUUM_RELATIVE_THRESHOLD * (rho.max() if rho.size else 0.0)
    m[rho <= vac] = 0.0


def _rhs(state_rho, state_m, config: SimConfig):
    law = config.pressure
    flux_id = 0 if config.flux == "llf" else 1
    vac = VACUUM_RELATIVE_THRESHOLD * (state_rho.max() if state_rho.size else 0.0)
    return kern.euler_rhs(state_rho, state_m, law.gamma, law.kappa,
                          config.grid.dx, flux_id, config.limiter_order, vac)


def step(state: EulerState, config: SimConfig,
         dt: Optional[float] = None) -> EulerState:
    """One SSP-RK2 step; dt defaults to cfl * dx / max(|v| + c)."""
    rho0, m0 = state.rho, state.m
    drho1, dm1, amax = _rhs(rho0, m0, config)
    if dt is None:
        if amax <= 0.0:
            raise SolverError("zero wave speed, cannot pick a time step")
        dt = config.cfl * config.grid.dx / amax
    elif dt * amax / config.grid.dx > 0.98:
        raise SolverError(
            f"time step {dt} violates the CFL budget (a_max = {amax})")

    rho1 = rho0 + dt * drho1
    m1 = m0 + dt * dm1
    _apply_floors(rho1, m1, config.density_floor)

    drho2, dm2, _ = _rhs(rho1, m1, config)
    rho2 = 0.5 * (rho0 + rho1 + dt * drho2)
    m2 = 0.5 * (m0 + m1 + dt * dm2)
    _apply_floors(rho2, m2, config.density_floor)

    if not (np.all(np.isfinite(rho2)) and np.all(np.isfinite(m2))):
        raise SolverError(
            f"non-finite state after step at t = {state.time} (dt = {dt})")
    return EulerState(config.grid, rho2, m2, time=state.time + dt)


@dataclass
class Trajectory:
    """Snapshots at a uniform cadence plus per-step energy/conservation series."""

    grid: Grid
    times: np.ndarray        # snapshot times, uniform spacing
    rho: np.ndarray          # (n_snapshots, n)
    m: np.ndarray            # (n_snapshots, n)
    energy_times: np.ndarray
    energy_series: np.ndarray
    mass_series: np.ndarray
    momentum_series: np.ndarray
    config: SimConfig
    steps: int = 0

    @property
    def dt_snap(self) -> float:
        return float(self.times[1] - self.times[0])

    def velocity(self) -> np.ndarray:
        v = np.zeros_like(self.rho)
        vac = VACUUM_RELATIVE_THRESHOLD * self.rho.max()
        np.divide(self.m, self.rho, out=v, where=self.rho > vac)
        return v

    def spacetime_grid(self) -> Grid:
        nt = self.rho.shape[0]
        return Grid(1, self.grid.n, self.grid.length, nt=nt,
                    t_end=nt * self.dt_snap, t0=float(self.times[0]))

    def as_fields(self):
        """(rho, v, m) as space-time Fields on the snapshot grid."""
        g = self.spacetime_grid()
        return (Field(g, self.rho), Field(g, self.velocity()), Field(g, self.m))


def simulate(config: SimConfig) -> Trajectory:
    """March the initial data to t_end, recording snapshots every
    snapshot_every steps and mass/momentum/energy every step.

    With fixed_dt (the default) the step is frozen from the initial wave
    speeds and the run aborts if the CFL budget is later violated, which
    keeps the snapshot cadence uniform for the budget analysis.
    """
    state = EulerState.from_specs(config.grid, config.ic_rho, config.ic_v,
                                  seed=config.seed)
    law = config.pressure

    _, _, amax0 = _rhs(state.rho, state.m, config)
    if amax0 <= 0.0:
        raise SolverError("initial data has zero wave speed everywhere")
    dt0 = config.cfl * config.grid.dx / amax0
    n_steps = max(1, int(math.ceil(config.t_end / dt0 - 1e-12)))
    dt = config.t_end / n_steps if config.fixed_dt else None

    snaps_rho = [state.rho.copy()]
    snaps_m = [state.m.copy()]
    snap_times = [state.time]
    e_series = [energy(state, law)]
    mass = [float(config.grid.dx * np.sum(state.rho))]
    mom = [float(config.grid.dx * np.sum(state.m))]
    e_times = [0.0]

    k = 0
    while True:
        if config.fixed_dt:
            if k >= n_steps:
                break
            dt_k = dt
        else:
            if state.time >= config.t_end - 1e-14:
                break
            _, _, amax = _rhs(state.rho, state.m, config)
            dt_k = min(config.cfl * config.grid.dx / amax,
                       config.t_end - state.time)
        state = step(state, config, dt=dt_k)
        k += 1
        e_series.append(energy(state, law))
        e_times.append(state.time)
        mass.append(float(config.grid.dx * np.sum(state.rho)))
        mom.append(float(config.grid.dx * np.sum(state.m)))
        if k % config.snapshot_every == 0:
            snaps_rho.append(state.rho.copy())
            snaps_m.append(state.m.copy())
            snap_times.append(state.time)

    return Trajectory(
        grid=config.grid,
        times=np.asarray(snap_times),
        rho=np.asarray(snaps_rho),
        m=np.asarray(snaps_m),
        energy_times=np.asarray(e_times),
        energy_series=np.asarray(e_series),
        mass_series=np.asarray(mass),
        momentum_series=np.asarray(mom),
        config=config,
        steps=k,
    )
