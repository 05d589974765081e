"""Equiaffine arc length, equiaffine curvature and extendable self-affinity.

With D = det(γ', γ'') and φ = |D|^{1/3}, the equiaffine parameter is
σ = ∫ φ dt.  Writing ' for d/dt,

    γ_σ   = γ' / φ
    γ_σσ  = γ'' / φ² - γ' φ' / φ³
    γ_σσσ = γ''' / φ³ - 3 γ'' φ' / φ⁴ - γ' φ'' / φ⁴ + 3 γ' φ'² / φ⁵

and det(γ_σ, γ_σσ) = sign(D).  Differentiating that constant gives
det(γ_σ, γ_σσσ) = 0, so γ_σσσ = -κ γ_σ with κ = sign(D) det(γ_σσ, γ_σσσ).
This κ (the equiaffine curvature) is what makes the frame Φ = (γ_σ, γ_σσ)
satisfy Φ_σ = Φ [[0, -κ], [1, 0]], whatever the orientation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from ._parallel import pmap
from .core import (AffineCurve, AffineMap, Curve, INFINITE_RADIUS, MAX_ORDER,
                   arc_length_reparam, cross)
from .errors import (CurveError, InflectionInDomain, InvalidParams, InvalidSteps)
from .lac_msa import LacParams, _sample_radius, fit_lac
from .quadrature import CumulativeIntegral

DET_FLOOR = 1e-8  # on |D| / |γ'|³ times the curve scale, i.e. on |κ| scale
SCAN_POINTS = 513
MARGIN = 0.1  # fraction of the domain added on each side for extendable curves


def _phi_jet(j):
    """(φ, φ'/φ, φ''/φ, sign D) from a 4th-order jet."""
    d1, d2, d3, d4 = j[1], j[2], j[3], j[4]
    D = cross(d1, d2)
    D1 = cross(d1, d3)
    D2 = cross(d2, d3) + cross(d1, d4)
    phi = np.cbrt(np.abs(D))
    r1 = D1 / (3 * D)
    r2 = D2 / (3 * D) - 2 * D1**2 / (9 * D**2)
    return phi, r1, r2, np.sign(D)


def equiaffine_frame_jet(curve: Curve, t):
    """γ_σ, γ_σσ, γ_σσσ and sign(D) at parameter(s) t."""
    j = curve.jet(t, MAX_ORDER)
    phi, r1, r2, sgn = _phi_jet(j)
    g1 = j[1] / phi
    g2 = (j[2] - j[1] * r1) / phi**2
    g3 = (j[3] - 3 * j[2] * r1 - j[1] * r2 + 3 * j[1] * r1**2) / phi**3
    return g1, g2, g3, sgn


def equiaffine_curvature_t(curve: Curve, t):
    """κ^SA at curve parameter t (no reparameterization needed)."""
    _, g2, g3, sgn = equiaffine_frame_jet(curve, t)
    return sgn * cross(g2, g3)


class EquiaffineCurve:
    """A curve with its equiaffine parameter σ(t), σ(base_point) = 0."""

    def __init__(self, curve: Curve, tol: float = 1e-10):
        self.underlying = curve
        self.tol = tol
        t = curve.grid(SCAN_POINTS)
        j = curve.jet(t, 2)
        D = cross(j[1], j[2])
        speed = np.abs(j[1])
        rel = np.abs(D) / speed**3 * curve.scale
        if not np.all(rel > DET_FLOOR) or not (np.all(D > 0) or np.all(D < 0)):
            bad = t[np.argmin(rel)]
            raise InflectionInDomain(f"det(γ', γ'') vanishes near t = {bad:.6g}")
        self.orientation = 1 if D[0] > 0 else -1
        lo, hi = curve.domain
        self._phi = lambda u: np.cbrt(np.abs(cross(*curve.jet(u, 2)[1:])))
        self._cum = CumulativeIntegral(self._phi, lo, hi, tol)
        self._base = self._cum(curve.base_point)
        self.sigma_lo = -self._base
        self.sigma_hi = self._cum.total - self._base
        self._knots_sigma = self._cum.cumulative - self._base

    @property
    def span(self) -> float:
        return self.sigma_hi - self.sigma_lo

    def sigma_of_t(self, t):
        return self._cum(t) - self._base

    def t_of_sigma(self, sigma):
        sigma = np.asarray(sigma, dtype=float)
        flat = np.clip(np.atleast_1d(sigma).ravel(), self.sigma_lo, self.sigma_hi)
        lo, hi = self.underlying.domain
        t = np.interp(flat, self._knots_sigma, self._cum.knots)
        for _ in range(30):
            step = (self.sigma_of_t(t) - flat) / self._phi(t)
            t = np.clip(t - step, lo, hi)
            if np.max(np.abs(step)) <= 1e-15 * (hi - lo):
                break
        return t.reshape(sigma.shape) if sigma.ndim else float(t[0])

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.sigma_lo, self.sigma_hi, n)

    def point(self, sigma):
        return self.underlying(self.t_of_sigma(sigma))

    def frame(self, sigma):
        """(γ_σ, γ_σσ) at σ."""
        g1, g2, _, _ = equiaffine_frame_jet(self.underlying, self.t_of_sigma(sigma))
        return g1, g2

    def kappa(self, sigma):
        return equiaffine_curvature_t(self.underlying, self.t_of_sigma(sigma))

    def unimodularity_defect(self, n: int = 65) -> float:
        """max |orientation * det(γ_σ, γ_σσ) - 1| over a grid."""
        g1, g2 = self.frame(self.grid(n))
        return float(np.max(np.abs(self.orientation * cross(g1, g2) - 1.0)))


def equiaffine_reparam(curve: Curve, tol: float = 1e-10) -> EquiaffineCurve:
    curve.check_regular()
    ec = EquiaffineCurve(curve, tol)
    defect = ec.unimodularity_defect()
    if defect > 1e-6:
        raise CurveError(f"equiaffine frame is not unimodular (defect {defect:.3g})")
    return ec


def equiaffine_curvature(ecurve: EquiaffineCurve, sigma):
    return ecurve.kappa(sigma)


# -- reconstruction --------------------------------------------------------

def _sa_rhs(k, e1, e2):
    return e1, e2, -k * e1


def _sa_rk4(k, z, e1, e2, h):
    """RK4 step of z' = e1, e1' = e2, e2' = -k e1 (vectorised)."""
    a = _sa_rhs(k, e1, e2)
    b = _sa_rhs(k, e1 + h / 2 * a[1], e2 + h / 2 * a[2])
    c = _sa_rhs(k, e1 + h / 2 * b[1], e2 + h / 2 * b[2])
    d = _sa_rhs(k, e1 + h * c[1], e2 + h * c[2])
    return tuple(x + h / 6 * (p + 2 * q + 2 * r + w)
                 for x, p, q, r, w in zip((z, e1, e2), a, b, c, d))


class EquiaffineFrenetCurve(Curve):
    """Solution of the equiaffine Frenet system with constant κ^SA.

    Parameterized by σ itself; dense output takes one RK4 step from the
    node below, as the Euclidean reconstruction does.
    """

    extendable = False

    def __init__(self, sigma, z, e1, e2, kappa_sa: float):
        super().__init__((sigma[0], sigma[-1]), sigma[0])
        self.sigma, self.z, self.e1, self.e2 = sigma, z, e1, e2
        self.kappa_sa = kappa_sa
        self.name = "equiaffine"

    def _jet(self, t, order):
        k = np.clip(np.searchsorted(self.sigma, t, side="right") - 1, 0, len(self.sigma) - 2)
        z, e1, e2 = _sa_rk4(self.kappa_sa, self.z[k], self.e1[k], self.e2[k], t - self.sigma[k])
        kap = self.kappa_sa
        out = np.stack([z, e1, e2, -kap * e1, -kap * e2])
        return out[: order + 1]


def reconstruct_equiaffine(kappa_sa: float, sigma_range: float, steps: int = 10_000):
    """Integrate Φ' = Φ [[0, -κ], [1, 0]] from the identity frame at σ = 0."""
    if steps < 100:
        raise InvalidSteps(f"steps must be >= 100, got {steps}")
    if not sigma_range > 0:
        raise ValueError("sigma_range must be positive")
    sigma = np.linspace(0.0, sigma_range, steps + 1)
    h = sigma_range / steps
    z = np.empty(steps + 1, dtype=complex)
    e1 = np.empty_like(z)
    e2 = np.empty_like(z)
    state = (0j, 1 + 0j, 1j)
    z[0], e1[0], e2[0] = state
    for i in range(steps):
        state = _sa_rk4(kappa_sa, *state, h)
        z[i + 1], e1[i + 1], e2[i + 1] = state
    return EquiaffineFrenetCurve(sigma, z, e1, e2, float(kappa_sa))


# -- witnesses -------------------------------------------------------------

def esa_witness(family: str, params=None, eps: float = 0.0) -> AffineMap:
    """Shift map of a conic in standard position.

    ellipse (A cos t, B sin t), hyperbola (A cosh t, B sinh t) and the
    parabola (t, t²): F maps the point at t to the point at t + eps.
    """
    if family == "parabola":
        return AffineMap([[1.0, 0.0], [2 * eps, 1.0]], (eps, eps**2))
    if family not in ("ellipse", "hyperbola"):
        raise InvalidParams(f"unknown conic family {family!r}")
    try:
        A, B = (float(v) for v in params)
    except (TypeError, ValueError):
        raise InvalidParams(f"{family} needs params (A, B)") from None
    if not (A > 0 and B > 0):
        raise InvalidParams("A and B must be positive")
    if family == "ellipse":
        c, s = math.cos(eps), math.sin(eps)
        return AffineMap([[c, -(A / B) * s], [(B / A) * s, c]])
    c, s = math.cosh(eps), math.sinh(eps)
    return AffineMap([[c, (A / B) * s], [(B / A) * s, c]])


def spiral_witness(a: float, b: float, eps: float) -> AffineMap:
    """Similarity z -> e^{(a+ib) eps} z, which shifts e^{(a+ib)t} by eps."""
    w = complex(math.exp(a * eps) * math.cos(b * eps), math.exp(a * eps) * math.sin(b * eps))
    return AffineMap([[w.real, -w.imag], [w.imag, w.real]])


def _xy(z):
    return np.array([z.real, z.imag])


def frame_witness(ecurve: EquiaffineCurve, kappa_sa: float, eps: float,
                  sigma0: float | None = None) -> AffineMap:
    """Equiaffine map sending γ(σ) to γ(σ + eps) on a constant-κ^SA curve.

    Built from the frame at sigma0: A = Φ0 exp(eps C) Φ0⁻¹ and the translation
    from γ(σ0 + eps) = γ0 + Φ0 ∫_0^eps exp(uC) e1 du, with both exponentials
    read off one augmented 3x3 matrix exponential.
    """
    s0 = ecurve.sigma_lo if sigma0 is None else sigma0
    g1, g2 = ecurve.frame(s0)
    p0 = ecurve.point(s0)
    P = np.column_stack([_xy(g1), _xy(g2)])
    M = np.zeros((3, 3))
    M[:2, :2] = [[0.0, -kappa_sa], [1.0, 0.0]]
    M[0, 2] = 1.0
    E = expm(eps * M)
    A = P @ E[:2, :2] @ np.linalg.inv(P)
    shifted = _xy(p0) + P @ E[:2, 2]
    return AffineMap(A, shifted - A @ _xy(p0))


# -- ESA verification ------------------------------------------------------

@dataclass(frozen=True)
class EsaReport:
    holds: bool
    kappa_sa: float
    kappa_sa_spread: float
    family: str
    witness_residual: float
    kappa_sa_unit: float = math.nan  # mean κ^SA after scaling to unit diameter
    spread_unit: float = math.nan
    witnesses: tuple = field(default=(), repr=False)  # (eps, AffineMap)

    def row(self):
        return (self.holds, self.family, self.kappa_sa, self.kappa_sa_spread,
                self.witness_residual)


def conic_family(mean_unit: float, spread_unit: float, zero_floor: float = 1e-8) -> str:
    """Sign of κ^SA with a dead band of 10x the spread (plus an absolute floor)."""
    band = max(10 * spread_unit, zero_floor)
    if abs(mean_unit) <= band:
        return "parabola"
    return "ellipse" if mean_unit > 0 else "hyperbola"


def _extended(curve: Curve) -> Curve:
    if not curve.extendable:
        return curve
    lo, hi = curve.domain
    pad = MARGIN * (hi - lo)
    wide = AffineCurve(curve, AffineMap.identity())
    Curve.__init__(wide, (lo - pad, hi + pad), curve.base_point)
    try:
        EquiaffineCurve(wide)
    except InflectionInDomain:
        return curve
    return wide


def kappa_sa_stats(ecurve: EquiaffineCurve, n: int = 257):
    """(mean, spread) of κ^SA over n equiaffine-uniform samples."""
    k = ecurve.kappa(ecurve.grid(n))
    mean = float(np.mean(k))
    return mean, float(np.max(np.abs(k - mean)))


def verify_esa(curve: Curve, eps_list=(0.1, 0.5, 1.0), tol: float = 1e-6,
               n: int = 257, n_check: int = 65) -> EsaReport:
    """Test for constant κ^SA and check the shift witnesses pointwise.

    holds requires spread ≤ tol relative to max(|mean|, 1) on the
    unit-diameter scale, and every witness residual ≤ tol times the diameter.
    Witnesses are tested on the domain plus a 10% parameter margin when the
    curve can be evaluated there.
    """
    eps_list = tuple(float(e) for e in eps_list)
    if not eps_list or min(eps_list) <= 0:
        raise ValueError("eps_list must be nonempty with positive entries")
    curve.check_regular()
    ec = EquiaffineCurve(curve)
    mean, spread = kappa_sa_stats(ec, n)
    unit = curve.scale ** (4.0 / 3.0)  # κ^SA scales as length^(-4/3)
    mean_u, spread_u = mean * unit, spread * unit
    constant = spread_u <= tol * max(abs(mean_u), 1.0)
    family = conic_family(mean_u, spread_u) if constant else "none"
    if not constant:
        return EsaReport(False, mean, spread, family, math.nan, mean_u, spread_u)

    wide = EquiaffineCurve(_extended(curve))
    # σ on `wide` is measured from the same base point as on `ec`

    def check(eps):
        F = frame_witness(wide, mean, eps, 0.0)
        lo, hi = max(ec.sigma_lo, wide.sigma_lo), min(ec.sigma_hi, wide.sigma_hi - eps)
        if hi <= lo:
            return F, math.nan
        sig = np.linspace(lo, hi, n_check)
        err = np.abs(wide.point(sig + eps) - F(wide.point(sig)))
        return F, float(np.max(err))

    results = pmap(check, eps_list)
    resid = [r for _, r in results]
    worst = max(resid) if not any(math.isnan(r) for r in resid) else math.nan
    holds = bool(np.isfinite(worst) and worst <= tol * curve.scale)
    return EsaReport(holds, mean, spread, family, worst, mean_u, spread_u,
                     tuple((e, F) for e, (F, _) in zip(eps_list, results)))


# -- classification --------------------------------------------------------

@dataclass(frozen=True)
class ClassifyTols:
    lac_tol: float = 1e-6
    esa_tol: float = 1e-6
    zero_floor: float = 1e-8
    n_samples: int = 256

    @classmethod
    def for_sampled(cls) -> "ClassifyTols":
        """Stencil derivatives lose digits; κ^SA needs four of them."""
        return cls(lac_tol=1e-3, esa_tol=1e-2, zero_floor=1e-3, n_samples=128)


@dataclass(frozen=True)
class Classification:
    tag: str
    params: dict
    residuals: dict

    def record(self) -> dict:
        return {"class": self.tag, "params": self.params, "residuals": self.residuals}


def _unit_diameter(curve: Curve) -> Curve:
    k = 1.0 / curve.scale
    return AffineCurve(curve, AffineMap([[k, 0.0], [0.0, k]]))


def _rescaled_lac(p: LacParams, c: float) -> dict:
    """LAC constants of the curve scaled by c, given those of the unit copy."""
    if p.alpha == 0:
        return {"alpha": 0.0, "xi": p.xi / c, "eta": p.eta + math.log(c)}
    lift = c**p.alpha
    return {"alpha": p.alpha, "xi": p.xi * lift / c, "eta": p.eta * lift}


def classify_curve(curve: Curve, tols: ClassifyTols | None = None) -> Classification:
    """line | circle | lac | parabola | ellipse | hyperbola | other.

    Similarity tests (LAC fit of the radius against arc length) run first,
    then the equiaffine test on κ^SA.  Runs on a unit-diameter copy so the
    thresholds do not depend on the curve's size.
    """
    tols = tols or ClassifyTols()
    unit = _unit_diameter(curve)
    residuals = {}
    try:
        alc = arc_length_reparam(unit)
        u, rho = _sample_radius(alc, tols.n_samples)
        rho = np.where(rho == INFINITE_RADIUS, np.inf, rho)
        fit = fit_lac(u, rho, tols.lac_tol)
        residuals.update({f"similarity_{k}": v for k, v in fit.branch_residuals.items()})
    except CurveError as exc:
        residuals["similarity_error"] = str(exc)
        fit = None
    if fit is not None and fit.ok:
        if fit.kind == "line":
            return Classification("line", {}, residuals)
        if fit.kind == "circle":
            return Classification("circle", {"radius": fit.radius * curve.scale}, residuals)
        return Classification("lac", _rescaled_lac(fit.params, curve.scale), residuals)

    try:
        ec = EquiaffineCurve(unit)
    except CurveError as exc:
        residuals["equiaffine_error"] = str(exc)
        return Classification("other", {}, residuals)
    mean, spread = kappa_sa_stats(ec)
    residuals["kappa_sa_spread"] = spread
    if spread > tols.esa_tol * max(abs(mean), 1.0):
        return Classification("other", {"kappa_sa": mean}, residuals)
    fam = conic_family(mean, spread, tols.zero_floor)
    return Classification(fam, {"kappa_sa": mean * curve.scale ** (-4.0 / 3.0)}, residuals)
