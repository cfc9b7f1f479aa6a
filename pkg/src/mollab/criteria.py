"""Hypothesis checker for the energy-conservation criteria.

Three regimes: local conservation (density bounded away from zero, no
initial-time statement), global conservation up to t = 0, and the vacuum
regime (density allowed to touch zero, velocity needs a temporal Besov
exponent). Each check lists every inequality with its threshold, the
supplied value, and pass/fail.

Thresholds are evaluated in exact rational arithmetic (fractions.Fraction
plus an infinity element with x/0 = inf for x > 0), so boundary cases like
q = d(p-3)/2 decide exactly. remark_mode relaxes the strict p, q > 3 to
>= 3; the extended-rational thresholds then produce the L^infinity
requirements of the endpoint case by themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

__all__ = [
    "INF", "as_exponent", "fmt_exponent", "CriterionParams", "CriterionItem",
    "Verdict", "check_local", "check_global", "check_vacuum", "run_check",
    "preset_params", "PRESET_NAMES",
]

INF = math.inf

Exponent = Union[Fraction, float]


def as_exponent(x) -> Exponent:
    """Normalize to Fraction or inf. Strings like '5/2' and 'inf' are
    accepted; floats are taken at their exact binary value."""
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        return Fraction(x)
    if x == INF:
        return INF
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, tuple) and len(x) == 2:
        return Fraction(x[0], x[1])
    raise TypeError(f"cannot interpret {x!r} as an exponent")


def fmt_exponent(x: Optional[Exponent]) -> str:
    if x is None:
        return "-"
    if x == INF:
        return "inf"
    return str(x)


def _is_inf(x: Exponent) -> bool:
    return x == INF


def over_minus3(p: Exponent) -> Exponent:
    """p/(p-3): inf at p = 3, limit 1 at p = inf."""
    if _is_inf(p):
        return Fraction(1)
    if p == 3:
        return INF
    if p < 3:
        raise ValueError("exponent below 3")
    return p / (p - 3)


def gamma_weight(p: Exponent, gamma: Fraction) -> Exponent:
    """p*(gamma-1)/2."""
    if _is_inf(p):
        return INF
    return p * (gamma - 1) / 2


def k_dimension_threshold(gamma: Fraction, d: int, p: Exponent,
                          q: Exponent) -> Exponent:
    """(gamma-1)*(d+q)*p / (2q - d(p-3)); inf when the denominator closes."""
    if _is_inf(p):
        return INF
    if _is_inf(q):
        return gamma_weight(p, gamma)  # limit q -> inf
    denom = 2 * q - d * (p - 3)
    if denom <= 0:
        return INF
    return (gamma - 1) * (d + q) * p / denom


def sqrt_density_threshold(k: Exponent, p: Exponent) -> Exponent:
    """2kp/(2k(p-3) - p), the Hoelder-conjugate exponent for the square-root
    density derivatives; inf when the split needs the endpoint."""
    if p == 3:
        return INF
    if _is_inf(p):
        if _is_inf(k):
            return Fraction(1)
        return 2 * k / (2 * k - 1)
    if _is_inf(k):
        return over_minus3(p)  # limit k -> inf
    denom = 2 * k * (p - 3) - p
    if denom <= 0:
        return INF
    return 2 * k * p / denom


def v0_threshold(gamma: Fraction, q: Exponent) -> Exponent:
    a = 2 * gamma / (gamma - 1)
    b = INF if _is_inf(q) else q / 2
    return max(a, b)


def _max(*xs: Exponent) -> Exponent:
    return max(xs)


@dataclass(frozen=True)
class CriterionParams:
    """Exponent data for one weak solution.

    Pair fields hold (time exponent, space exponent). grad_rho/dt_rho feed
    the local check; the square-root density pairs and v0 feed the
    global/vacuum checks. rho_floor > 0 asserts a positive lower density
    bound.
    """

    gamma: Exponent
    p: Exponent
    q: Exponent
    alpha: Exponent
    d: int = 3
    beta: Optional[Exponent] = None
    k: Optional[Exponent] = None
    l: Optional[Exponent] = None
    rho_floor: Exponent = Fraction(0)
    grad_rho: Optional[Tuple[Exponent, Exponent]] = None
    dt_rho: Optional[Tuple[Exponent, Exponent]] = None
    grad_sqrt_rho: Optional[Tuple[Exponent, Exponent]] = None
    dt_sqrt_rho: Optional[Tuple[Exponent, Exponent]] = None
    v0: Optional[Exponent] = None
    remark_mode: bool = False

    def __post_init__(self):
        conv = lambda v: None if v is None else as_exponent(v)
        pair = lambda v: None if v is None else (as_exponent(v[0]), as_exponent(v[1]))
        object.__setattr__(self, "gamma", as_exponent(self.gamma))
        object.__setattr__(self, "p", as_exponent(self.p))
        object.__setattr__(self, "q", as_exponent(self.q))
        object.__setattr__(self, "alpha", as_exponent(self.alpha))
        object.__setattr__(self, "beta", conv(self.beta))
        object.__setattr__(self, "k", conv(self.k))
        object.__setattr__(self, "l", conv(self.l))
        object.__setattr__(self, "rho_floor", as_exponent(self.rho_floor))
        object.__setattr__(self, "grad_rho", pair(self.grad_rho))
        object.__setattr__(self, "dt_rho", pair(self.dt_rho))
        object.__setattr__(self, "grad_sqrt_rho", pair(self.grad_sqrt_rho))
        object.__setattr__(self, "dt_sqrt_rho", pair(self.dt_sqrt_rho))
        object.__setattr__(self, "v0", conv(self.v0))
        if not self.gamma > 1:
            raise ValueError("gamma must exceed 1")
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if not (0 < self.alpha < 1):
            raise ValueError("alpha must lie in (0, 1)")
        if self.p < 3 or self.q < 3:
            raise ValueError("velocity exponents p, q must be >= 3")
        if self.beta is not None and self.beta < self.alpha:
            raise ValueError("beta must be >= alpha")


@dataclass
class CriterionItem:
    name: str
    required: str
    supplied: str
    passed: bool
    note: str = ""

    def to_dict(self):
        return {"name": self.name, "required": self.required,
                "supplied": self.supplied, "passed": self.passed,
                "note": self.note}


@dataclass
class Verdict:
    check: str
    items: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(it.passed for it in self.items)

    def to_dict(self):
        return {"check": self.check, "passed": self.passed,
                "items": [it.to_dict() for it in self.items]}

    def __str__(self):
        lines = [f"{self.check}: {'PASS' if self.passed else 'FAIL'}"]
        for it in self.items:
            mark = "ok " if it.passed else "FAIL"
            note = f"  [{it.note}]" if it.note else ""
            lines.append(f"  {mark} {it.name}: need {it.required}, "
                         f"have {it.supplied}{note}")
        return "\n".join(lines)


def _ge_item(name: str, supplied: Optional[Exponent], required: Exponent,
             note: str = "") -> CriterionItem:
    if supplied is None:
        return CriterionItem(name, fmt_exponent(required), "-", False,
                             note or "value not supplied")
    return CriterionItem(name, fmt_exponent(required), fmt_exponent(supplied),
                         supplied >= required, note)


def _pair_items(label: str, supplied, required: Tuple[Exponent, Exponent],
                note: str = ""):
    if supplied is None:
        return [CriterionItem(f"{label} (time, space)",
                              f"({fmt_exponent(required[0])}, {fmt_exponent(required[1])})",
                              "-", False, note or "value not supplied")]
    ok = supplied[0] >= required[0] and supplied[1] >= required[1]
    return [CriterionItem(
        f"{label} (time, space)",
        f"({fmt_exponent(required[0])}, {fmt_exponent(required[1])})",
        f"({fmt_exponent(supplied[0])}, {fmt_exponent(supplied[1])})",
        ok, note)]


def _velocity_exponent_items(pr: CriterionParams):
    bound = "3 (endpoint allowed)" if pr.remark_mode else "> 3"
    p_ok = pr.p >= 3 if pr.remark_mode else pr.p > 3
    q_ok = pr.q >= 3 if pr.remark_mode else pr.q > 3
    return [
        CriterionItem("velocity time exponent p", bound, fmt_exponent(pr.p), p_ok),
        CriterionItem("velocity space exponent q", bound, fmt_exponent(pr.q), q_ok),
    ]


def _alpha_item(pr: CriterionParams) -> CriterionItem:
    return CriterionItem("spatial smoothness alpha", "> 1/3",
                         fmt_exponent(pr.alpha), pr.alpha > Fraction(1, 3))


def check_local(params: CriterionParams) -> Verdict:
    """Local (interior) energy conservation: positive density floor, strict
    alpha > 1/3, density and its first derivatives at the conjugate
    exponents."""
    pr = params
    v = Verdict("local-conservation")
    v.items.append(CriterionItem("density floor c > 0", "> 0",
                                 fmt_exponent(pr.rho_floor), pr.rho_floor > 0))
    v.items.extend(_velocity_exponent_items(pr))
    v.items.append(_alpha_item(pr))
    v.items.append(_ge_item("density time integrability k",
                            pr.k, _max(over_minus3(pr.p),
                                       gamma_weight(pr.p, pr.gamma))))
    v.items.append(_ge_item("density space integrability l",
                            pr.l, _max(over_minus3(pr.q),
                                       gamma_weight(pr.q, pr.gamma))))
    req = (over_minus3(pr.p), over_minus3(pr.q))
    note = ("proof-side estimate only needs (p/(p-2), q/(q-2)); "
            "statement-level exponents enforced")
    v.items.extend(_pair_items("density gradient", pr.grad_rho, req, note))
    v.items.extend(_pair_items("density time derivative", pr.dt_rho, req, note))
    return v


def _global_core_items(pr: CriterionParams, v: Verdict):
    v.items.extend(_velocity_exponent_items(pr))
    v.items.append(_alpha_item(pr))
    if _is_inf(pr.p):
        qd_ok, qd_req = False, "inf"
    else:
        thr = Fraction(pr.d) * (pr.p - 3) / 2
        qd_ok = pr.q > thr
        qd_req = f"> {fmt_exponent(thr)}"
    v.items.append(CriterionItem("space/time exponent balance q > d(p-3)/2",
                                 qd_req, fmt_exponent(pr.q), qd_ok))
    v.items.append(_ge_item(
        "density time integrability k", pr.k,
        _max(over_minus3(pr.p), gamma_weight(pr.p, pr.gamma),
             k_dimension_threshold(pr.gamma, pr.d, pr.p, pr.q))))
    v.items.append(_ge_item(
        "density space integrability l", pr.l,
        _max(over_minus3(pr.q), gamma_weight(pr.q, pr.gamma))))
    k_eff = pr.k if pr.k is not None else Fraction(1)
    l_eff = pr.l if pr.l is not None else Fraction(1)
    req = (sqrt_density_threshold(k_eff, pr.p),
           sqrt_density_threshold(l_eff, pr.q))
    v.items.extend(_pair_items("sqrt-density gradient", pr.grad_sqrt_rho, req))
    v.items.extend(_pair_items("sqrt-density time derivative", pr.dt_sqrt_rho, req))
    v.items.append(_ge_item("initial velocity integrability v0", pr.v0,
                            v0_threshold(pr.gamma, pr.q)))


def check_global(params: CriterionParams) -> Verdict:
    """Global conservation up to the initial time, density floor positive."""
    pr = params
    v = Verdict("global-conservation")
    v.items.append(CriterionItem("density floor c > 0", "> 0",
                                 fmt_exponent(pr.rho_floor), pr.rho_floor > 0))
    _global_core_items(pr, v)
    return v


def check_vacuum(params: CriterionParams) -> Verdict:
    """Global conservation with vacuum allowed; needs the temporal Besov
    exponent beta >= alpha on top of the global hypotheses."""
    pr = params
    v = Verdict("vacuum-conservation")
    v.items.append(CriterionItem("density floor", ">= 0 (vacuum allowed)",
                                 fmt_exponent(pr.rho_floor), pr.rho_floor >= 0))
    if pr.beta is None:
        v.items.append(CriterionItem("temporal smoothness beta", ">= alpha",
                                     "-", False, "value not supplied"))
    else:
        v.items.append(CriterionItem("temporal smoothness beta",
                                     f">= {fmt_exponent(pr.alpha)}",
                                     fmt_exponent(pr.beta),
                                     pr.beta >= pr.alpha))
    _global_core_items(pr, v)
    return v


_CHECKS = {"local": check_local, "global": check_global, "vacuum": check_vacuum}


def run_check(kind: str, params: CriterionParams) -> Verdict:
    try:
        fn = _CHECKS[kind]
    except KeyError:
        raise ValueError(f"unknown check {kind!r}; pick from {sorted(_CHECKS)}")
    return fn(params)


# ---------------------------------------------------------------------------
# Preset parameterizations: the natural boundary cases of each regime, where
# every threshold is met with equality. Each entry returns (params, check).
# ---------------------------------------------------------------------------

def _q_cap(gamma: Fraction) -> Fraction:
    return (3 * gamma - 1) / (gamma - 1)


def preset_params(name: str, gamma, q=None, p=None, d: int = 3):
    """Built-in boundary parameter sets; q (and p for 'local-matched')
    default to the sharp admissible endpoints."""
    gamma = as_exponent(gamma)
    alpha = Fraction(2, 5)   # any value > 1/3 works; presets test thresholds
    beta = Fraction(1, 2)
    cap = _q_cap(gamma)

    if name == "local-matched":
        pq = as_exponent(p if p is not None else (q if q is not None else 4))
        if not 3 <= pq <= cap:
            raise ValueError(f"p=q must lie in [3, {cap}]")
        kl = over_minus3(pq)
        pr = CriterionParams(
            gamma=gamma, p=pq, q=pq, alpha=alpha, d=d, k=kl, l=kl,
            rho_floor=1, grad_rho=(kl, kl), dt_rho=(kl, kl),
            remark_mode=(pq == 3))
        return pr, "local"
    if name == "local-endpoint":
        pq = cap
        kl = (3 * gamma - 1) / 2
        pr = CriterionParams(
            gamma=gamma, p=pq, q=pq, alpha=alpha, d=d, k=kl, l=kl,
            rho_floor=1, grad_rho=(kl, kl), dt_rho=(kl, kl))
        return pr, "local"
    if name == "global-time-bounded":
        qq = as_exponent(q if q is not None else cap)
        if not 3 <= qq <= cap:
            raise ValueError(f"q must lie in [3, {cap}]")
        ll = over_minus3(qq)
        sp = sqrt_density_threshold(ll, qq)
        pr = CriterionParams(
            gamma=gamma, p=3, q=qq, alpha=alpha, d=d, k=INF, l=ll,
            rho_floor=1, grad_sqrt_rho=(INF, sp), dt_sqrt_rho=(INF, sp),
            v0=v0_threshold(gamma, qq), remark_mode=True)
        return pr, "global"
    if name == "global-endpoint":
        qq = cap
        ll = (3 * gamma - 1) / 2
        sp = sqrt_density_threshold(ll, qq)   # = 3*gamma - 1
        pr = CriterionParams(
            gamma=gamma, p=3, q=qq, alpha=alpha, d=d, k=INF, l=ll,
            rho_floor=1, grad_sqrt_rho=(INF, sp), dt_sqrt_rho=(INF, sp),
            v0=v0_threshold(gamma, qq), remark_mode=True)
        return pr, "global"
    if name == "vacuum-bounded":
        pr = CriterionParams(
            gamma=gamma, p=3, q=3, alpha=alpha, beta=beta, d=d,
            k=INF, l=INF, rho_floor=0,
            grad_sqrt_rho=(INF, INF), dt_sqrt_rho=(INF, INF),
            v0=v0_threshold(gamma, Fraction(3)), remark_mode=True)
        return pr, "vacuum"
    if name == "vacuum-interpolated":
        qq = as_exponent(q if q is not None else cap)
        if not 3 < qq <= cap:
            raise ValueError(f"q must lie in (3, {cap}]")
        ll = over_minus3(qq)
        sp = sqrt_density_threshold(ll, qq)   # = 2q/(q-3)
        pr = CriterionParams(
            gamma=gamma, p=3, q=qq, alpha=alpha, beta=beta, d=d,
            k=INF, l=ll, rho_floor=0,
            grad_sqrt_rho=(INF, sp), dt_sqrt_rho=(INF, sp),
            v0=v0_threshold(gamma, qq), remark_mode=True)
        return pr, "vacuum"
    if name == "vacuum-endpoint":
        qq = cap
        ll = (3 * gamma - 1) / 2
        sp = sqrt_density_threshold(ll, qq)
        pr = CriterionParams(
            gamma=gamma, p=3, q=qq, alpha=alpha, beta=beta, d=d,
            k=INF, l=ll, rho_floor=0,
            grad_sqrt_rho=(INF, sp), dt_sqrt_rho=(INF, sp),
            v0=v0_threshold(gamma, qq), remark_mode=True)
        return pr, "vacuum"
    raise ValueError(f"unknown preset {name!r}")


PRESET_NAMES = ("local-matched", "local-endpoint", "global-time-bounded",
                "global-endpoint", "vacuum-bounded", "vacuum-interpolated",
                "vacuum-endpoint")
