"""Scale-by-scale energy budget of a simulated trajectory.

Testing the momentum equation against phi(t) * v^eps and using the mass
equation turns the windowed energy change into six commutator terms:

  -II phi' (rho |v^eps|^2 / 2 + kappa rho^gamma / (gamma-1))
      = - II phi v^eps [dt(rho v)^eps - dt(rho v^eps)]          (T1)
      - II phi v^eps dive[(rho v v)^eps - rho (v v)^eps]        (T2)
      + II phi grad v^eps . rho [(v v)^eps - v^eps v^eps]       (T3)
      - 1/2 II phi |v^eps|^2 div[rho v^eps - (rho v)^eps]       (T4)
      + 1/2 II phi |v^eps|^2 [dt rho^eps - dt rho]              (T5)
      - kappa II phi [v^eps grad(rho^gamma)^eps - v grad rho^gamma]  (T6)

For exact solutions every term vanishes as eps -> 0 when the fields are
regular enough; a persistent T3 is the signature of anomalous dissipation.
The discrete residual (lhs minus the sum) measures how far the snapshots
are from solving the equations and shrinks under refinement.

Smoothing is spatial by default; mode='spacetime' switches every ^eps to
the (d+1)-dimensional kernel and restricts to the interior time window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .euler import Trajectory
from .mollify import (Mollifier, _conv_space_arrays, _conv_spacetime_window,
                      spectral_derivative)

__all__ = ["PhiWindow", "EnergyBalanceReport", "balance_terms",
           "default_window", "TERM_DESCRIPTIONS"]

TERM_DESCRIPTIONS = {
    "T1": "momentum-rate commutator",
    "T2": "convective-flux commutator",
    "T3": "subscale energy flux",
    "T4": "mass-flux commutator",
    "T5": "density-rate commutator",
    "T6": "pressure-work commutator",
}


@dataclass(frozen=True)
class PhiWindow:
    """Trapezoidal time window: 0 outside [t_lo, t_hi], linear ramps of the
    given width inside, 1 on the plateau. Lipschitz by construction."""

    t_lo: float
    t_hi: float
    ramp: float

    def __post_init__(self):
        if self.ramp <= 0.0:
            raise ValueError("ramp must be positive")
        if self.t_lo + self.ramp > self.t_hi - self.ramp + 1e-15:
            raise ValueError("window too narrow for its ramps")

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        up = np.clip((t - self.t_lo) / self.ramp, 0.0, 1.0)
        down = np.clip((self.t_hi - t) / self.ramp, 0.0, 1.0)
        return np.minimum(up, down)


class _TS:
    """Array on a contiguous block of snapshot rows [off, off + len)."""

    def __init__(self, arr: np.ndarray, off: int):
        self.arr = arr
        self.off = off

    @property
    def hi(self) -> int:
        return self.off + self.arr.shape[0]

    def ddt(self, dt: float) -> "_TS":
        return _TS((self.arr[2:] - self.arr[:-2]) / (2.0 * dt), self.off + 1)


def _align(*series):
    lo = max(s.off for s in series)
    hi = min(s.hi for s in series)
    if hi <= lo:
        raise ValueError("no common time rows; epsilon too large for the run")
    return lo, hi, [s.arr[lo - s.off: hi - s.off] for s in series]


def default_window(traj: Trajectory, epsilon: float,
                   mode: str = "space") -> PhiWindow:
    """Trapezoid spanning the valid rows, ramps of width max(eps, 4*dt)."""
    dt = traj.dt_snap
    pad = 2
    if mode == "spacetime":
        pad += int(np.ceil(epsilon / dt))
    t_lo = traj.times[0] + pad * dt
    t_hi = traj.times[-1] - pad * dt
    ramp = max(epsilon, 4.0 * dt)
    if t_lo + ramp > t_hi - ramp:
        raise ValueError("trajectory too short for a compactly supported window")
    return PhiWindow(float(t_lo), float(t_hi), float(ramp))


@dataclass
class EnergyBalanceReport:
    epsilon: float
    mode: str
    terms: dict
    lhs: float
    residual: float
    pressure_transport_residual: float
    window: PhiWindow
    rows: tuple

    def term_values(self) -> np.ndarray:
        return np.array([self.terms[k] for k in sorted(self.terms)])

    def total(self) -> float:
        return float(sum(self.terms.values()))


def balance_terms(traj: Trajectory, epsilon: float,
                  phi: Optional[PhiWindow] = None,
                  mode: str = "space") -> EnergyBalanceReport:
    """Evaluate the windowed budget of a trajectory at one smoothing scale."""
    if mode not in ("space", "spacetime"):
        raise ValueError(f"unknown mode {mode!r}")
    nt = traj.rho.shape[0]
    if nt < 7:
        raise ValueError("need at least 7 snapshots")
    spacing = np.diff(traj.times)
    if not np.allclose(spacing, spacing[0], rtol=1e-10):
        raise ValueError("snapshots must be uniformly spaced "
                         "(run the solver with fixed_dt)")
    dt = traj.dt_snap
    dx = traj.grid.dx
    law = traj.config.pressure
    gamma, kappa = law.gamma, law.kappa

    rho = traj.rho
    m = traj.m
    v = traj.velocity()
    pg = np.power(rho, gamma)

    sgrid = traj.grid
    if mode == "space":
        mol = Mollifier.space(sgrid, epsilon)

        def moll(a):
            return _TS(_conv_space_arrays(a, sgrid, mol, "auto"), 0)
    else:
        st = traj.spacetime_grid()
        mol = Mollifier.spacetime(st, epsilon)

        def moll(a):
            out, t0 = _conv_spacetime_window(a, st, mol)
            return _TS(out, t0)

    raw = lambda a: _TS(a, 0)

    vE = moll(v)
    mE = moll(m)
    v2E = moll(v * v)
    mvE = moll(m * v)
    pgE = moll(pg)
    rhoE = moll(rho)

    # rho * v^eps and its time derivative (the unsmoothed density rides along)
    lo0 = vE.off
    rho_vE = _TS(rho[lo0:vE.hi] * vE.arr, lo0)

    dt_mE = mE.ddt(dt)
    dt_rho_vE = rho_vE.ddt(dt)
    dt_rho = raw(rho).ddt(dt)
    dt_rhoE = rhoE.ddt(dt)
    dt_pg = raw(pg).ddt(dt)

    ddx = lambda a: spectral_derivative(a, dx, axis=1)

    if phi is None:
        phi = default_window(traj, epsilon, mode)
    phi_samples = phi(traj.times)
    dphi = _TS((phi_samples[2:] - phi_samples[:-2]) / (2.0 * dt), 1)

    lo, hi, (vE_c, mE_c, v2E_c, mvE_c, pgE_c, rhoE_c, dt_mE_c, dt_rho_vE_c,
             dt_rho_c, dt_rhoE_c, dt_pg_c, dphi_c) = _align(
        vE, mE, v2E, mvE, pgE, rhoE, dt_mE, dt_rho_vE, dt_rho, dt_rhoE,
        dt_pg, dphi)

    times_c = traj.times[lo:hi]
    if phi(traj.times[lo]) > 0 or phi(traj.times[hi - 1]) > 0:
        raise ValueError("phi window is not compactly supported in the rows "
                         "where every term is defined")
    phi_c = phi(times_c)
    rho_c = rho[lo:hi]
    v_c = v[lo:hi]
    pg_c = pg[lo:hi]

    cell = dt * dx

    def integrate(w):
        return float(cell * np.sum(phi_c * np.sum(w, axis=1)))

    t1 = -integrate(vE_c * (dt_mE_c - dt_rho_vE_c))
    t2 = -integrate(vE_c * ddx(mvE_c - rho_c * v2E_c))
    t3 = integrate(ddx(vE_c) * rho_c * (v2E_c - vE_c * vE_c))
    t4 = -0.5 * integrate(vE_c * vE_c * ddx(rho_c * vE_c - mE_c))
    t5 = 0.5 * integrate(vE_c * vE_c * (dt_rhoE_c - dt_rho_c))
    t6 = -kappa * integrate(vE_c * ddx(pgE_c) - v_c * ddx(pg_c))

    density = 0.5 * rho_c * vE_c * vE_c + kappa * pg_c / (gamma - 1.0)
    lhs = -float(cell * np.sum(dphi_c * np.sum(density, axis=1)))

    terms = {"T1": t1, "T2": t2, "T3": t3, "T4": t4, "T5": t5, "T6": t6}
    residual = lhs - sum(terms.values())

    ptr = kappa * integrate(v_c * ddx(pg_c)) - kappa / (gamma - 1.0) * integrate(dt_pg_c)

    return EnergyBalanceReport(
        epsilon=float(epsilon), mode=mode, terms=terms, lhs=lhs,
        residual=float(residual), pressure_transport_residual=float(ptr),
        window=phi, rows=(lo, hi))
