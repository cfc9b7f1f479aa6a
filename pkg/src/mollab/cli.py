"""Config-driven experiment runner.

Subcommands: generate, mollify, besov, commutator, simulate, balance,
check, run. `run` takes a TOML config describing one experiment
(cet-rate, lions-rate, besov-fit, euler-run, balance-sweep,
criterion-check) and writes a manifest, per-sweep CSVs, and a summary
JSON into the output directory.

Exit codes: 0 = ran and every declared tolerance held, 1 = ran but a
tolerance failed, 2 = configuration or runtime error. Output bytes are
reproducible for a fixed config and seed (the manifest carries the only
timestamp). MOLLAB_OUT sets the default output root.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

import numpy as np

from . import __version__, _kernels
from .balance import balance_terms
from .besov import besov_seminorm_space, holder_exponent_fit
from .commutator import commutator_sweep
from .criteria import CriterionParams, preset_params, run_check
from .euler import PressureLaw, SimConfig, simulate
from .fieldio import export_csv, load_field_csv, save_field_csv, write_json
from .grid import make_grid
from .mollify import mollify_space, mollify_spacetime
from .synth import (Constant, FourierMode, Holder, Indicator, Separable, Sum,
                    TwoState, VacuumBump, generate)

EXIT_OK, EXIT_TOLERANCE, EXIT_CONFIG = 0, 1, 2


def _say(quiet, *msg):
    if not quiet:
        print(*msg)


def _out_root(explicit):
    if explicit:
        return Path(explicit)
    return Path(os.environ.get("MOLLAB_OUT", "mollab_out"))


def _pmap(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(it) for it in items]


def _dyadic_sweep(hi: float, lo: float):
    """hi, hi/2, hi/4, ... down to lo (inclusive, strictly decreasing)."""
    if not 0 < lo <= hi:
        raise ValueError("need 0 < eps_lo <= eps_hi")
    eps, out = hi, []
    while eps >= lo * (1 - 1e-12):
        out.append(eps)
        eps /= 2.0
    if len(out) < 3:
        raise ValueError("sweep must contain at least 3 points")
    return out


# ---------------------------------------------------------------- generate

def _spec_from_args(args):
    kind = args.kind
    if kind == "constant":
        return Constant(args.value)
    if kind == "mode":
        return FourierMode(args.k, amplitude=args.amplitude, phase=args.phase)
    if kind == "holder":
        return Holder(args.alpha, modes=args.modes)
    if kind == "indicator":
        return Indicator((args.a, args.b))
    if kind == "twostate":
        return TwoState(args.left, args.right, args.jump)
    if kind == "vacuum-bump":
        return VacuumBump(args.floor, args.center, args.width, args.amplitude)
    raise ValueError(f"unknown field kind {kind!r}")


def cmd_generate(args):
    grid = make_grid(args.d, args.n, args.length, nt=args.nt, t_end=args.t_end)
    field = generate(grid, _spec_from_args(args), seed=args.seed,
                     time_periodic=args.time_periodic)
    save_field_csv(field, args.out)
    _say(args.quiet, f"wrote {args.out}")
    return EXIT_OK


def cmd_mollify(args):
    field = load_field_csv(args.field)
    if args.mode == "space":
        out = mollify_space(field, args.epsilon)
    else:
        out = mollify_spacetime(field, args.epsilon)
    save_field_csv(out, args.out)
    _say(args.quiet, f"wrote {args.out}")
    return EXIT_OK


def cmd_besov(args):
    field = load_field_csv(args.field)
    fit = holder_exponent_fit(field, args.q)
    result = {"alpha_hat": fit.alpha_hat, "slope": fit.slope, "r2": fit.r2,
              "flag": fit.flag, "q": args.q}
    if args.alpha is not None:
        est = besov_seminorm_space(field, args.alpha, args.q)
        result["seminorm"] = est.seminorm
        result["seminorm_alpha"] = args.alpha
    if args.pairs_out:
        export_csv(zip(fit.distances, fit.norms), ["shift", "difference_norm"],
                   args.pairs_out)
    print(json.dumps(result, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_commutator(args):
    outdir = _out_root(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    eps = _dyadic_sweep(args.eps_hi, args.eps_lo)
    if args.kind == "cet":
        grid = make_grid(1, args.n)
        f = generate(grid, Holder(args.alpha1, modes=args.modes), seed=args.seed)
        g = generate(grid, Holder(args.alpha2, modes=args.modes),
                     seed=args.seed + 1)
        rep = commutator_sweep(f, g, eps, kind="cet", p=args.q, q=args.q,
                               field_tags=(f"holder({args.alpha1})",
                                           f"holder({args.alpha2})"))
        target = args.alpha1 + args.alpha2
    else:
        grid = make_grid(1, args.n, nt=args.nt, t_end=1.0)
        f = generate(grid, Separable(FourierMode(1), FourierMode(1)),
                     seed=args.seed, time_periodic=True)
        g = generate(grid, Separable(Constant(1.0),
                                     Holder(args.alpha2, modes=args.modes)),
                     seed=args.seed + 1, time_periodic=True)
        rep = commutator_sweep(f, g, eps, kind="lions", p=args.p, q=args.q,
                               derivative_axis="x",
                               field_tags=("lipschitz mode",
                                           f"holder({args.alpha2})"))
        target = None
    export_csv([(e, v, rep.norm_params[0], rep.norm_params[1], rep.kind)
                for e, v in rep.pairs()],
               ["epsilon", "norm", "p", "q", "kind"], outdir / "sweep.csv")
    summary = {"kind": rep.kind, "slope": rep.fit.slope, "r2": rep.fit.r2,
               "target": target, "fields": list(rep.field_tags),
               "epsilons": list(map(float, rep.epsilons)),
               "norms": list(map(float, rep.norms))}
    write_json(summary, outdir / "summary.json")
    _say(args.quiet, f"slope = {rep.fit.slope}, r2 = {rep.fit.r2}")
    return EXIT_OK


# ---------------------------------------------------------------- simulate

_IC_BUILDERS = {
    "equilibrium": lambda a: (Constant(a.rho0), Constant(0.0)),
    "acoustic": lambda a: (Sum((Constant(a.rho0), FourierMode(a.k, amplitude=a.amplitude))),
                           Constant(0.0)),
    "riemann": lambda a: (TwoState(a.rho_left, a.rho_right, a.jump),
                          Constant(0.0)),
    "vacuum-bump": lambda a: (VacuumBump(a.floor, 0.5, a.width, a.amplitude),
                              Constant(0.0)),
}


def _sim_config_from_args(args) -> SimConfig:
    grid = make_grid(1, args.n, args.length)
    ic_rho, ic_v = _IC_BUILDERS[args.ic](args)
    return SimConfig(grid=grid, pressure=PressureLaw(args.gamma),
                     ic_rho=ic_rho, ic_v=ic_v, t_end=args.t_end,
                     cfl=args.cfl, flux=args.flux,
                     snapshot_every=args.snapshot_every, seed=args.seed)


def _write_trajectory(traj, outdir, quiet):
    x = traj.grid.x()
    v = traj.velocity()
    rows = []
    for j, t in enumerate(traj.times):
        for i in range(traj.grid.n):
            rows.append((t, x[i], traj.rho[j, i], v[j, i], traj.m[j, i]))
    export_csv(rows, ["t", "x", "rho", "v", "m"], outdir / "snapshots.csv")
    export_csv(zip(traj.energy_times, traj.energy_series), ["t", "E"],
               outdir / "energy.csv")
    export_csv(zip(traj.energy_times, traj.mass_series, traj.momentum_series),
               ["t", "mass", "momentum"], outdir / "conservation.csv")
    _say(quiet, f"wrote snapshots/energy/conservation CSVs in {outdir}")


def _conservation_stats(traj):
    mass = traj.mass_series
    mom = traj.momentum_series
    mass_drift = float(np.max(np.abs(np.diff(mass))) / np.abs(mass[0]))
    scale = max(float(np.max(np.abs(mom))), float(np.abs(mass[0])))
    mom_drift = float(np.max(np.abs(np.diff(mom))) / scale)
    e = traj.energy_series
    e_defect = float((e[0] - e[-1]) / e[0])
    e_increase = float(np.max(np.diff(e)) / e[0]) if len(e) > 1 else 0.0
    return {"mass_drift_per_step": mass_drift,
            "momentum_drift_per_step": mom_drift,
            "energy_defect_relative": e_defect,
            "max_energy_increase_per_step": e_increase,
            "steps": int(traj.steps)}


def _run_manifest(traj, args_echo):
    return {
        "config": args_echo,
        "energy": {"t": [float(t) for t in traj.energy_times],
                   "E": [float(e) for e in traj.energy_series]},
        "conservation": {"mass": [float(v) for v in traj.mass_series],
                         "momentum": [float(v) for v in traj.momentum_series]},
        "steps": int(traj.steps),
    }


def cmd_simulate(args):
    outdir = _out_root(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    cfg_echo = {k: v for k, v in vars(args).items()
                if k not in ("func", "quiet", "out", "threads")}
    traj = simulate(_sim_config_from_args(args))
    _write_trajectory(traj, outdir, args.quiet)
    write_json(_run_manifest(traj, cfg_echo), outdir / "manifest.json")
    stats = _conservation_stats(traj)
    stats["conserved"] = stats["energy_defect_relative"] < 1e-12
    write_json(stats, outdir / "summary.json")
    _say(args.quiet, json.dumps(stats, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_balance(args):
    outdir = _out_root(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    traj = simulate(_sim_config_from_args(args))
    epsilons = [float(e) for e in args.epsilons.split(",")]
    reports = _pmap(lambda e: balance_terms(traj, e, mode=args.mode),
                    epsilons, args.threads)
    rows = [(r.epsilon, *(r.terms[k] for k in sorted(r.terms)), r.lhs,
             r.residual, r.pressure_transport_residual) for r in reports]
    export_csv(rows, ["epsilon", "T1", "T2", "T3", "T4", "T5", "T6",
                      "lhs", "residual", "pressure_transport_residual"],
               outdir / "balance.csv")
    summary = {"epsilons": epsilons,
               "terms": {f"T{i}": [r.terms[f"T{i}"] for r in reports]
                         for i in range(1, 7)},
               "residuals": [r.residual for r in reports]}
    write_json(summary, outdir / "summary.json")
    _say(args.quiet, f"wrote {outdir/'balance.csv'}")
    return EXIT_OK


def _params_from_table(tbl) -> CriterionParams:
    pair = lambda v: None if v is None else (v[0], v[1])
    return CriterionParams(
        gamma=tbl["gamma"], p=tbl["p"], q=tbl["q"], alpha=tbl["alpha"],
        d=int(tbl.get("d", 3)), beta=tbl.get("beta"),
        k=tbl.get("k"), l=tbl.get("l"),
        rho_floor=tbl.get("rho_floor", 0),
        grad_rho=pair(tbl.get("grad_rho")), dt_rho=pair(tbl.get("dt_rho")),
        grad_sqrt_rho=pair(tbl.get("grad_sqrt_rho")),
        dt_sqrt_rho=pair(tbl.get("dt_sqrt_rho")),
        v0=tbl.get("v0"), remark_mode=bool(tbl.get("remark_mode", False)))


def cmd_check(args):
    if args.preset:
        params, kind = preset_params(args.preset, Fraction(args.gamma),
                                     q=Fraction(args.q) if args.q else None)
    else:
        with open(args.params) as fh:
            tbl = json.load(fh)
        params = _params_from_table(tbl)
        kind = args.check
    verdict = run_check(kind, params)
    doc = verdict.to_dict()
    print(json.dumps(doc, indent=2, sort_keys=True))
    if args.out:
        write_json(doc, Path(args.out))
    return EXIT_OK if verdict.passed else EXIT_TOLERANCE


# ---------------------------------------------------------------- run (TOML)

def _exp_cet_rate(cfg, outdir, seed, threads, quiet):
    g = cfg.get("grid", {})
    fl = cfg.get("fields", {})
    sw = cfg["sweep"]
    nm = cfg.get("norm", {})
    tol = cfg.get("tolerances", {})
    grid = make_grid(1, int(g.get("n", 1 << 14)))
    a1, a2 = float(fl.get("alpha1", 0.4)), float(fl.get("alpha2", 0.4))
    modes = fl.get("modes")
    f = generate(grid, Holder(a1, modes=modes), seed=seed)
    h = generate(grid, Holder(a2, modes=modes), seed=seed + 1)
    eps = _dyadic_sweep(float(sw["eps_hi"]), float(sw["eps_lo"]))
    q = float(nm.get("q", 1.5))
    rep = commutator_sweep(f, h, eps, kind="cet", p=q, q=q,
                           field_tags=(f"holder({a1})", f"holder({a2})"))
    export_csv([(e, v, q, q, "cet") for e, v in rep.pairs()],
               ["epsilon", "norm", "p", "q", "kind"], outdir / "sweep.csv")
    target = a1 + a2
    band = float(tol.get("slope_band", 0.15))
    r2_min = float(tol.get("r2_min", 0.98))
    ok = (rep.fit.slope is not None and abs(rep.fit.slope - target) <= band
          and rep.fit.r2 >= r2_min)
    summary = {"experiment": "cet-rate", "slope": rep.fit.slope,
               "r2": rep.fit.r2, "target": target, "slope_band": band,
               "r2_min": r2_min, "pass": ok, "fields": list(rep.field_tags),
               "epsilons": [float(e) for e in rep.epsilons],
               "norms": [float(v) for v in rep.norms]}
    return summary, ok


def _exp_lions_rate(cfg, outdir, seed, threads, quiet):
    g = cfg.get("grid", {})
    fl = cfg.get("fields", {})
    sw = cfg["sweep"]
    nm = cfg.get("norm", {})
    tol = cfg.get("tolerances", {})
    n = int(g.get("n", 256))
    nt = int(g.get("nt", 256))
    grid = make_grid(1, n, nt=nt, t_end=float(g.get("t_end", 1.0)))
    f = generate(grid, Separable(FourierMode(int(fl.get("f_mode", 1))),
                                 FourierMode(int(fl.get("f_mode", 1)))),
                 seed=seed, time_periodic=True)
    galpha = float(fl.get("g_alpha", 0.3))
    gmodes = fl.get("g_modes")
    h = generate(grid, Separable(Constant(1.0), Holder(galpha, modes=gmodes)),
                 seed=seed + 1, time_periodic=True)
    eps = _dyadic_sweep(float(sw["eps_hi"]), float(sw["eps_lo"]))
    p, q = float(nm.get("p", 2.0)), float(nm.get("q", 2.0))
    rep = commutator_sweep(f, h, eps, kind="lions", p=p, q=q,
                           derivative_axis=fl.get("derivative_axis", "x"),
                           field_tags=("low mode", f"holder({galpha})"))
    export_csv([(e, v, p, q, "lions") for e, v in rep.pairs()],
               ["epsilon", "norm", "p", "q", "kind"], outdir / "sweep.csv")
    ratios = [float(rep.norms[i] / rep.norms[i + 1])
              for i in range(len(rep.norms) - 1)]
    mid = ratios[1:-1] if len(ratios) > 2 else ratios
    rmin = float(tol.get("ratio_min", 1.5))
    ok = all(r >= rmin for r in mid)
    summary = {"experiment": "lions-rate", "ratios": ratios,
               "middle_ratios": mid, "ratio_min": rmin, "pass": ok,
               "epsilons": [float(e) for e in rep.epsilons],
               "norms": [float(v) for v in rep.norms]}
    return summary, ok


def _exp_besov_fit(cfg, outdir, seed, threads, quiet):
    g = cfg.get("grid", {})
    fd = cfg.get("field", {})
    ft = cfg.get("fit", {})
    tol = cfg.get("tolerances", {})
    grid = make_grid(1, int(g.get("n", 1 << 14)))
    kind = fd.get("kind", "holder")
    if kind == "holder":
        alpha = float(fd.get("alpha", 0.5))
        field = generate(grid, Holder(alpha, modes=fd.get("modes")), seed=seed)
        expected = alpha
    elif kind == "indicator":
        field = generate(grid, Indicator((0.0, grid.length / 2)), seed=seed)
        expected = 1.0 / float(ft.get("q", 3))
    else:
        raise ValueError(f"besov-fit supports holder/indicator, not {kind!r}")
    q = float(ft.get("q", 3))
    fit = holder_exponent_fit(field, q)
    export_csv(zip(fit.distances, fit.norms), ["shift", "difference_norm"],
               outdir / "pairs.csv")
    band = float(tol.get("band", 0.1))
    ok = fit.alpha_hat is not None and abs(fit.alpha_hat - expected) <= band
    summary = {"experiment": "besov-fit", "alpha_hat": fit.alpha_hat,
               "r2": fit.r2, "expected": expected, "band": band, "q": q,
               "pass": ok}
    return summary, ok


def _sim_config_from_table(cfg, seed) -> SimConfig:
    g = cfg.get("grid", {})
    s = cfg.get("sim", {})
    grid = make_grid(1, int(g.get("n", 1024)), float(g.get("length", 1.0)))
    ic = s.get("ic", "acoustic")
    ns = argparse.Namespace(
        rho0=float(s.get("rho0", 1.0)), amplitude=float(s.get("amplitude", 0.1)),
        k=int(s.get("k", 1)), rho_left=float(s.get("rho_left", 1.0)),
        rho_right=float(s.get("rho_right", 0.125)), jump=float(s.get("jump", 0.5)),
        floor=float(s.get("floor", 0.0)), width=float(s.get("width", 0.25)))
    ic_rho, ic_v = _IC_BUILDERS[ic](ns)
    return SimConfig(grid=grid, pressure=PressureLaw(float(s.get("gamma", 2.0))),
                     ic_rho=ic_rho, ic_v=ic_v, t_end=float(s.get("t_end", 0.2)),
                     cfl=float(s.get("cfl", 0.4)), flux=s.get("flux", "llf"),
                     snapshot_every=int(s.get("snapshot_every", 1)), seed=seed)


def _exp_euler_run(cfg, outdir, seed, threads, quiet):
    tol = cfg.get("tolerances", {})
    traj = simulate(_sim_config_from_table(cfg, seed))
    _write_trajectory(traj, outdir, quiet)
    stats = _conservation_stats(traj)
    mass_tol = float(tol.get("mass_tol", 1e-13))
    checks = {"mass": stats["mass_drift_per_step"] <= mass_tol,
              "momentum": stats["momentum_drift_per_step"] <= mass_tol}
    if "energy_drift_max" in tol:
        checks["energy_drift"] = (abs(stats["energy_defect_relative"])
                                  <= float(tol["energy_drift_max"]))
    if tol.get("expect_dissipative"):
        checks["dissipative"] = (stats["energy_defect_relative"]
                                 >= float(tol.get("min_defect", 1e-3)))
    stats["conserved"] = abs(stats["energy_defect_relative"]) < 1e-12
    ok = all(checks.values())
    summary = {"experiment": "euler-run", **stats, "checks": checks, "pass": ok}
    return summary, ok


def _exp_balance_sweep(cfg, outdir, seed, threads, quiet):
    bal = cfg.get("balance", {})
    tol = cfg.get("tolerances", {})
    traj = simulate(_sim_config_from_table(cfg, seed))
    epsilons = [float(e) for e in bal.get("epsilons", [1 / 32, 1 / 64, 1 / 128])]
    mode = bal.get("mode", "space")
    reports = _pmap(lambda e: balance_terms(traj, e, mode=mode),
                    epsilons, threads)
    rows = [(r.epsilon, *(r.terms[k] for k in sorted(r.terms)), r.lhs,
             r.residual, r.pressure_transport_residual) for r in reports]
    export_csv(rows, ["epsilon", "T1", "T2", "T3", "T4", "T5", "T6",
                      "lhs", "residual", "pressure_transport_residual"],
               outdir / "balance.csv")
    terms = {f"T{i}": [abs(r.terms[f"T{i}"]) for r in reports]
             for i in range(1, 7)}
    checks = {}
    if tol.get("expect_monotone"):
        checks["monotone"] = all(
            all(seq[j] > seq[j + 1] for j in range(len(seq) - 1))
            for seq in terms.values())
    if "plateau_rel" in tol:
        t3 = [r.terms["T3"] for r in reports]
        checks["plateau"] = (abs(t3[-1] - t3[-2])
                             <= float(tol["plateau_rel"]) * abs(t3[-2]))
    ok = all(checks.values()) if checks else True
    summary = {"experiment": "balance-sweep", "epsilons": epsilons,
               "terms_abs": terms,
               "residuals": [r.residual for r in reports],
               "pressure_transport_residuals":
                   [r.pressure_transport_residual for r in reports],
               "checks": checks, "pass": ok}
    return summary, ok


def _exp_criterion_check(cfg, outdir, seed, threads, quiet):
    ck = cfg.get("check", {})
    if "preset" in ck:
        params, kind = preset_params(ck["preset"], Fraction(str(ck["gamma"])),
                                     q=Fraction(str(ck["q"])) if "q" in ck else None)
    else:
        params = _params_from_table(cfg["params"])
        kind = ck.get("kind", "local")
    verdict = run_check(kind, params)
    write_json(verdict.to_dict(), outdir / "verdict.json")
    return {"experiment": "criterion-check", **verdict.to_dict()}, verdict.passed


_EXPERIMENTS = {
    "cet-rate": _exp_cet_rate,
    "lions-rate": _exp_lions_rate,
    "besov-fit": _exp_besov_fit,
    "euler-run": _exp_euler_run,
    "balance-sweep": _exp_balance_sweep,
    "criterion-check": _exp_criterion_check,
}


def cmd_run(args):
    with open(args.config, "rb") as fh:
        cfg = tomllib.load(fh)
    name = cfg.get("experiment")
    if name not in _EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}; "
                         f"pick from {sorted(_EXPERIMENTS)}")
    outdir = _out_root(args.out) / cfg.get("name", name)
    outdir.mkdir(parents=True, exist_ok=True)
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    before = set(outdir.iterdir())
    try:
        summary, ok = _EXPERIMENTS[name](cfg, outdir, seed,
                                         args.threads, args.quiet)
        write_json(summary, outdir / "summary.json")
        manifest = {"config": cfg, "seed": seed, "version": __version__,
                    "numpy": np.__version__, "kernels": _kernels.backend(),
                    "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S")}
        write_json(manifest, outdir / "manifest.json")
    except Exception:
        for leftover in set(outdir.iterdir()) - before:
            if leftover.is_file():
                leftover.unlink()
        raise
    _say(args.quiet, f"{name}: {'PASS' if ok else 'TOLERANCE FAILURE'} "
                     f"(outputs in {outdir})")
    return EXIT_OK if ok else EXIT_TOLERANCE


# ---------------------------------------------------------------- argparse

def _add_common(sp):
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mollab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a synthetic field to CSV")
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--length", type=float, default=1.0)
    g.add_argument("--nt", type=int, default=None)
    g.add_argument("--t-end", type=float, default=None)
    g.add_argument("--kind", required=True,
                   choices=["constant", "mode", "holder", "indicator",
                            "twostate", "vacuum-bump"])
    g.add_argument("--value", type=float, default=1.0)
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--amplitude", type=float, default=1.0)
    g.add_argument("--phase", type=float, default=0.0)
    g.add_argument("--alpha", type=float, default=0.5)
    g.add_argument("--modes", type=int, default=None)
    g.add_argument("--a", type=float, default=0.0)
    g.add_argument("--b", type=float, default=0.5)
    g.add_argument("--left", type=float, default=1.0)
    g.add_argument("--right", type=float, default=0.125)
    g.add_argument("--jump", type=float, default=0.5)
    g.add_argument("--floor", type=float, default=0.0)
    g.add_argument("--center", type=float, default=0.5)
    g.add_argument("--width", type=float, default=0.25)
    g.add_argument("--time-periodic", action="store_true")
    g.set_defaults(func=cmd_generate, seed=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--quiet", action="store_true")
    g.add_argument("--out", required=True)

    m = sub.add_parser("mollify", help="smooth a field file at one scale")
    m.add_argument("--field", required=True)
    m.add_argument("--epsilon", type=float, required=True)
    m.add_argument("--mode", choices=["space", "spacetime"], default="space")
    m.add_argument("--out", required=True)
    m.add_argument("--quiet", action="store_true")
    m.set_defaults(func=cmd_mollify)

    b = sub.add_parser("besov", help="fit the scaling exponent of a field file")
    b.add_argument("--field", required=True)
    b.add_argument("--q", type=float, default=3.0)
    b.add_argument("--alpha", type=float, default=None,
                   help="also evaluate the semi-norm at this exponent")
    b.add_argument("--pairs-out", default=None)
    b.set_defaults(func=cmd_besov)

    c = sub.add_parser("commutator", help="dyadic commutator sweep on "
                                          "synthetic fields")
    c.add_argument("--kind", choices=["cet", "lions"], default="cet")
    c.add_argument("--n", type=int, default=1 << 14)
    c.add_argument("--nt", type=int, default=256)
    c.add_argument("--alpha1", type=float, default=0.4)
    c.add_argument("--alpha2", type=float, default=0.4)
    c.add_argument("--modes", type=int, default=None)
    c.add_argument("--eps-hi", type=float, default=0.125)
    c.add_argument("--eps-lo", type=float, default=1.0 / 512)
    c.add_argument("--p", type=float, default=2.0)
    c.add_argument("--q", type=float, default=1.5)
    _add_common(c)
    c.set_defaults(func=cmd_commutator, seed=0)

    s = sub.add_parser("simulate", help="run the 1D solver")
    s.add_argument("--n", type=int, default=1024)
    s.add_argument("--length", type=float, default=1.0)
    s.add_argument("--gamma", type=float, default=2.0)
    s.add_argument("--cfl", type=float, default=0.4)
    s.add_argument("--t-end", type=float, default=0.2)
    s.add_argument("--flux", choices=["llf", "hll"], default="llf")
    s.add_argument("--ic", choices=sorted(_IC_BUILDERS), default="acoustic")
    s.add_argument("--rho0", type=float, default=1.0)
    s.add_argument("--amplitude", type=float, default=0.1)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--rho-left", type=float, default=1.0)
    s.add_argument("--rho-right", type=float, default=0.125)
    s.add_argument("--jump", type=float, default=0.5)
    s.add_argument("--floor", type=float, default=0.0)
    s.add_argument("--width", type=float, default=0.25)
    s.add_argument("--snapshot-every", type=int, default=8)
    _add_common(s)
    s.set_defaults(func=cmd_simulate, seed=0)

    ba = sub.add_parser("balance", help="energy budget sweep of a run")
    ba.add_argument("--n", type=int, default=1024)
    ba.add_argument("--length", type=float, default=1.0)
    ba.add_argument("--gamma", type=float, default=2.0)
    ba.add_argument("--cfl", type=float, default=0.4)
    ba.add_argument("--t-end", type=float, default=0.2)
    ba.add_argument("--flux", choices=["llf", "hll"], default="llf")
    ba.add_argument("--ic", choices=sorted(_IC_BUILDERS), default="acoustic")
    ba.add_argument("--rho0", type=float, default=1.0)
    ba.add_argument("--amplitude", type=float, default=0.1)
    ba.add_argument("--k", type=int, default=1)
    ba.add_argument("--rho-left", type=float, default=1.0)
    ba.add_argument("--rho-right", type=float, default=0.125)
    ba.add_argument("--jump", type=float, default=0.5)
    ba.add_argument("--floor", type=float, default=0.0)
    ba.add_argument("--width", type=float, default=0.25)
    ba.add_argument("--snapshot-every", type=int, default=8)
    ba.add_argument("--epsilons", default="0.03125,0.015625,0.0078125")
    ba.add_argument("--mode", choices=["space", "spacetime"], default="space")
    _add_common(ba)
    ba.set_defaults(func=cmd_balance, seed=0)

    ck = sub.add_parser("check", help="evaluate a conservation criterion")
    ck.add_argument("--check", choices=["local", "global", "vacuum"],
                    default="local")
    ck.add_argument("--params", help="JSON file of exponent data")
    ck.add_argument("--preset", choices=None, default=None)
    ck.add_argument("--gamma", default="2")
    ck.add_argument("--q", default=None)
    ck.add_argument("--out", default=None)
    ck.set_defaults(func=cmd_check)

    r = sub.add_parser("run", help="run a TOML experiment config")
    r.add_argument("config")
    _add_common(r)
    r.set_defaults(func=cmd_run)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # config/runtime errors -> exit 2
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
