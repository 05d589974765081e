"""Log-aesthetic curves (LACs) and the Miura self-affinity.

A LAC of slope alpha has curvature radius

    rho(s) = (xi s + eta) ** (1 / alpha)   (alpha != 0)
    rho(s) = exp(xi s + eta)               (alpha == 0)

on the part of the s-axis where xi s + eta >= 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from ._parallel import pmap
from .core import ArcLengthCurve, FrenetCurve, INFINITE_RADIUS, reconstruct_from_curvature
from .errors import DomainViolation, InsufficientSamples, InvalidParams, ZeroEta

NOISE_FLOOR = 1e-9


@dataclass(frozen=True)
class LacParams:
    alpha: float
    xi: float
    eta: float
    s_lo: float = 0.0
    s_hi: float = 1.0

    def __post_init__(self):
        if self.xi == 0:
            raise InvalidParams("xi must be nonzero")
        if not self.s_hi > self.s_lo:
            raise InvalidParams("empty arc-length domain")
        if self.alpha != 0:
            lo = self.xi * self.s_lo + self.eta
            hi = self.xi * self.s_hi + self.eta
            if min(lo, hi) < 0:
                raise DomainViolation(
                    f"xi*s + eta < 0 on [{self.s_lo}, {self.s_hi}]; the LAC is undefined there")

    @property
    def length(self) -> float:
        return self.s_hi - self.s_lo


def _base(params: LacParams, s):
    base = params.xi * np.asarray(s, dtype=float) + params.eta
    if np.any(base < 0):
        raise DomainViolation("xi*s + eta < 0")
    return base


def lac_radius(params: LacParams, s):
    """Curvature radius at arc length s; inf where xi s + eta = 0 and alpha < 0."""
    if params.alpha == 0:
        return np.exp(params.xi * np.asarray(s, dtype=float) + params.eta)
    base = _base(params, s)
    with np.errstate(divide="ignore"):
        return base ** (1.0 / params.alpha)


def lac_curvature(params: LacParams):
    """(kappa, dkappa/ds, d2kappa/ds2) as vectorised functions of s."""
    a, xi, eta = params.alpha, params.xi, params.eta
    if a == 0:
        k = lambda s: np.exp(-(xi * s + eta))
        return k, (lambda s: -xi * k(s)), (lambda s: xi**2 * k(s))
    p = -1.0 / a
    k = lambda s: (xi * s + eta) ** p
    dk = lambda s: p * xi * (xi * s + eta) ** (p - 1)
    d2k = lambda s: p * (p - 1) * xi**2 * (xi * s + eta) ** (p - 2)
    return k, dk, d2k


def generate_lac(params: LacParams, steps: int = 10_000) -> FrenetCurve:
    """Integrate the Frenet system with kappa = 1 / lac_radius.

    The returned curve is parameterised by u = s - s_lo on [0, length].
    """
    k, dk, d2k = lac_curvature(params)
    s0 = params.s_lo
    curve = reconstruct_from_curvature(
        lambda u: k(u + s0), params.length, steps,
        dkappa=lambda u: dk(u + s0), d2kappa=lambda u: d2k(u + s0),
        name="lac", s_offset=s0)
    curve.params = {"alpha": params.alpha, "xi": params.xi, "eta": params.eta}
    return curve


@dataclass(frozen=True)
class MsaReparam:
    """The exponential reparameterisation t -> s under which the MSA is exact.

    ``s(t)`` is arc length measured from the base point (t = 0), and
    ``lac_s(t)`` the same position in the LAC's own s coordinate.
    """

    branch: str
    beta: float
    base_s: float
    scale: float  # s(t) = scale * (e^{beta t} - 1), or scale * t for alpha == 0
    mu: float
    nu: float

    def s(self, t):
        t = np.asarray(t, dtype=float)
        if self.branch == "exponential":
            return self.scale * t
        return self.scale * np.expm1(self.beta * t)

    def lac_s(self, t):
        return self.base_s + self.s(t)

    def t_of_lac_s(self, s):
        u = np.asarray(s, dtype=float) - self.base_s
        if self.branch == "exponential":
            return u / self.scale
        return np.log1p(u / self.scale) / self.beta

    def shift(self, t, eps):
        """Λ_ε s(t) = s(t + ε) - s(0 + ε)."""
        return self.s(np.asarray(t) + eps) - self.s(eps)


def msa_reparam(params: LacParams, beta: float = 1.0, base_s: float = 0.0) -> MsaReparam:
    """Reparameterisation making Λ_ε(s, rho) = (mu^ε s, nu^ε rho) hold exactly.

    alpha != 0:  s = (eta0 / xi)(e^{beta t} - 1), mu = e^beta, nu = e^{beta/alpha},
    where eta0 = xi * base_s + eta is the offset seen from the base point.
    alpha == 0:  t = (beta / xi) s, mu = 1, nu = e^{xi^2 / beta}.
    """
    if beta == 0:
        raise InvalidParams("beta must be nonzero")
    if params.alpha == 0:
        return MsaReparam("exponential", beta, base_s, params.xi / beta, 1.0,
                          math.exp(params.xi**2 / beta))
    eta0 = params.xi * base_s + params.eta
    if eta0 == 0:
        raise ZeroEta("xi*s + eta vanishes at the base point; move the base point")
    return MsaReparam("power", beta, base_s, eta0 / params.xi, math.exp(beta),
                      math.exp(beta / params.alpha))


def circle_reparam(C: float, beta: float = 1.0) -> MsaReparam:
    """s = C (e^{beta t} - 1) on a circle: mu = e^beta, nu = 1."""
    if C == 0 or beta == 0:
        raise InvalidParams("C and beta must be nonzero")
    return MsaReparam("circle", beta, 0.0, C, math.exp(beta), 1.0)


# -- fitting ---------------------------------------------------------------

@dataclass(frozen=True)
class LacFit:
    """Outcome of fit_lac.  ``kind`` is line, circle, lac or None (no fit)."""

    kind: str | None
    params: LacParams | None
    residual: float
    branch_residuals: dict = field(default_factory=dict)
    radius: float | None = None  # circle radius when kind == "circle"
    branch: str | None = None

    @property
    def ok(self) -> bool:
        return self.kind is not None


def _lcg_slope_guess(s, rho):
    X = np.log(rho)
    dX = np.gradient(X, s)
    with np.errstate(divide="ignore", invalid="ignore"):
        Y = -np.log(np.abs(dX))
        slope = np.gradient(Y, s) / dX
    slope = slope[np.isfinite(slope)]
    return float(np.median(slope)) if len(slope) else 1.0


def _power_fit(s, rho):
    """Least squares of log rho = (1/alpha) log(xi s + eta) over (alpha, xi, eta)."""
    logr = np.log(rho)
    r0 = math.exp(float(np.mean(logr)))
    rn = rho / r0  # alpha-th powers of rho/r0 stay O(1)
    alpha0 = _lcg_slope_guess(s, rho)
    if not np.isfinite(alpha0) or abs(alpha0) < 1e-3:
        alpha0 = math.copysign(1e-3, alpha0 if np.isfinite(alpha0) else 1.0)
    alpha0 = float(np.clip(alpha0, -50, 50))

    def lin(alpha):
        A = np.column_stack([s, np.ones_like(s)])
        return np.linalg.lstsq(A, rn**alpha, rcond=None)[0]

    def resid(p):
        alpha, xi, eta = p
        base = xi * s + eta
        bad = base <= 0
        out = np.log(np.where(bad, 1.0, base)) / alpha - np.log(rn)
        return np.where(bad, 1e3, out)

    best = None
    starts = list(dict.fromkeys([alpha0, 1.0, -1.0, 2.0, 0.5, -0.5, -2.0]))
    for a0 in starts:
        xi0, eta0 = lin(a0)
        try:
            sol = least_squares(resid, [a0, xi0, eta0], method="lm", xtol=1e-15, ftol=1e-15,
                                gtol=1e-15, max_nfev=4000)
        except ValueError:
            continue
        alpha, xi, eta = sol.x
        if alpha == 0 or not np.all(xi * s + eta > 0):
            continue
        err = float(np.max(np.abs(np.expm1(resid(sol.x)))))
        try:
            lift = math.pow(r0, float(alpha))
        except OverflowError:
            continue
        if math.isfinite(lift) and (best is None or err < best[0]):
            best = (err, alpha, xi * lift, eta * lift)
    return best


def fit_lac(s, rho, tol: float = 1e-6) -> LacFit:
    """Match (s, rho) samples against the LAC family and its degenerate limits.

    Branches, simplest first: line (rho = inf), circle (constant rho),
    exponential (alpha = 0) and power (alpha != 0).  The simplest branch
    inside `tol` wins unless a richer branch at least halves its residual
    while that residual is still above numerical noise.  Residuals are max
    relative errors in rho.
    """
    s = np.asarray(s, dtype=float)
    rho = np.abs(np.asarray(rho, dtype=float))
    if len(s) < 8:
        raise InsufficientSamples(f"need >= 8 samples, got {len(s)}")
    if not np.all(np.diff(s) > 0):
        raise ValueError("s must be strictly increasing")
    length = s[-1] - s[0]
    res = {}
    with np.errstate(divide="ignore"):
        res["line"] = float(np.max(length / rho))
    if not np.all(np.isfinite(rho)) or np.any(rho == 0):
        kind = "line" if res["line"] <= tol else None
        return LacFit(kind, None, res["line"], res, branch=kind)

    r_c = 0.5 * (rho.max() + rho.min())
    res["circle"] = float(np.max(np.abs(rho / r_c - 1)))
    xi, eta = np.polyfit(s, np.log(rho), 1)
    res["exponential"] = float(np.max(np.abs(np.expm1(xi * s + eta - np.log(rho)))))
    power = _power_fit(s, rho)
    res["power"] = power[0] if power else math.inf

    order = ["line", "circle", "exponential", "power"]
    winner = None
    for name in order:
        if res[name] <= tol and (winner is None or (
                res[winner] > NOISE_FLOOR and res[name] < 0.5 * res[winner])):
            winner = name
    best = min(res.values())
    if winner is None:
        return LacFit(None, None, best, res)
    params = None
    lo, hi = float(s[0]), float(s[-1])
    if winner == "exponential":
        params = LacParams(0.0, float(xi), float(eta), lo, hi)
    elif winner == "power":
        _, a, x, e = power
        params = _clipped_params(float(a), float(x), float(e), lo, hi)
    kind = "lac" if params is not None else winner
    return LacFit(kind, params, res[winner], res, r_c if winner == "circle" else None, winner)


def _clipped_params(alpha, xi, eta, lo, hi):
    # a fitted zero of xi*s + eta can land a hair inside the sampled range
    root = -eta / xi
    if lo < root < hi:
        if abs(root - lo) < abs(hi - root):
            lo = root
        else:
            hi = root
    if xi * lo + eta < 0:
        lo = root
    if xi * hi + eta < 0:
        hi = root
    return LacParams(alpha, xi, eta, lo, hi)


# -- Miura self-affinity ---------------------------------------------------

@dataclass(frozen=True)
class MsaReport:
    holds: bool
    mu: float
    nu: float
    beta: float
    residual: float
    fitted: object  # LacParams, "circle", "line" or None
    constants: str = "determined"  # "arbitrary" for lines
    tested_eps: tuple = ()
    fit_residual: float = math.nan

    @property
    def alpha(self):
        return self.fitted.alpha if isinstance(self.fitted, LacParams) else math.nan

    def row(self):
        p = self.fitted if isinstance(self.fitted, LacParams) else None
        return (self.holds, self.mu, self.nu, self.beta,
                p.alpha if p else math.nan, p.xi if p else math.nan,
                p.eta if p else math.nan, self.residual)


def _sample_radius(curve: ArcLengthCurve, n: int):
    u = curve.s_all * (np.arange(n) + 0.5) / n  # arc length from the start
    rho = np.abs(curve.radius(curve.s_lo + u))
    return u, rho


def verify_msa(curve: ArcLengthCurve, beta: float = 1.0, eps_list=(0.05, 0.1, 0.2),
               tol: float = 1e-6, n_fit: int = 256, n_check: int = 64) -> MsaReport:
    """Fit the LAC family, build the exponential reparameterisation and test
    Λ_ε(s, rho)(t) = (mu^ε s(t), nu^ε rho(t)) against measured radii.

    The arc-length identity is algebraic; the radius identity uses the
    curve's own curvature, so it fails on anything that is not a LAC.
    """
    eps_list = tuple(float(e) for e in eps_list)
    if not eps_list or min(eps_list) <= 0:
        raise ValueError("eps_list must be nonempty with positive entries")
    u, rho = _sample_radius(curve, n_fit)
    fit = fit_lac(u, rho, tol)
    if not fit.ok:
        return MsaReport(False, math.nan, math.nan, beta, fit.residual, None,
                         fit_residual=fit.residual)
    if fit.kind == "line":
        return MsaReport(True, math.exp(beta), 1.0, beta, fit.residual, "line",
                         "arbitrary", eps_list, fit.residual)

    if fit.kind == "circle":
        rep = circle_reparam(curve.s_all, beta)
    else:
        p = fit.params
        mid = 0.5 * (u[0] + u[-1])
        rep = msa_reparam(p, beta, base_s=mid)
    t_ends = np.sort(rep.t_of_lac_s(np.array([u[0], u[-1]])))

    def radius_at(t):
        return np.abs(curve.radius(curve.s_lo + rep.lac_s(t)))

    def check(eps):
        lo, hi = t_ends[0], t_ends[1] - eps
        if hi <= lo:
            return None
        t = np.linspace(lo, hi, n_check)
        s_err = np.max(np.abs(rep.shift(t, eps) - rep.mu**eps * rep.s(t))) / curve.s_all
        r_err = np.max(np.abs(radius_at(t + eps) / (rep.nu**eps * radius_at(t)) - 1))
        return float(max(s_err, r_err))

    results = pmap(check, eps_list)
    tested = tuple(e for e, r in zip(eps_list, results) if r is not None)
    errs = [r for r in results if r is not None]
    residual = max(errs) if errs else math.inf
    fitted = fit.params if fit.kind == "lac" else "circle"
    return MsaReport(bool(errs) and residual <= tol, rep.mu, rep.nu, beta, residual,
                     fitted, "determined", tested, fit.residual)
