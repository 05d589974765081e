"""Self-affinity of subcurves: every piece of the curve is an affine image of
the whole.  Lines and parabolas are the only curves with this property.

For the parabola (t, t²) the piece over [t0, t1] is the image of the piece
over [0, 1] under A = [[d, 0], [2 t0 d, d²]], b = (t0, t0²), d = t1 - t0,
with matching parameter σ = d t + t0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .core import (AffineMap, Curve, arc_length_reparam, cross, curvature,
                   winding_injectivity_check)
from .equiaffine_esa import EquiaffineCurve, conic_family, kappa_sa_stats
from .errors import CurveError, EmptyInterval

LINE_FLOOR = 1e-10  # on max |kappa| * scale
PARABOLA_SPREAD = 1e-6  # on unit-diameter κ^SA spread


def parabola_subcurve_affine(t0: float, t1: float) -> AffineMap:
    if not t0 < t1:
        raise EmptyInterval(f"need t0 < t1, got [{t0}, {t1}]")
    d = t1 - t0
    return AffineMap([[d, 0.0], [2 * t0 * d, d * d]], (t0, t0 * t0))


# -- bounding parallelograms ------------------------------------------------

@dataclass(frozen=True)
class Parallelogram:
    """anchor + λ1 v1 + λ2 v2 with λ1, λ2 in [0, 1]."""

    anchor: complex
    v1: complex
    v2: complex

    @property
    def vectors(self):
        return (self.v1.real, self.v1.imag), (self.v2.real, self.v2.imag)

    @property
    def degenerate(self) -> bool:
        size = max(abs(self.v1), abs(self.v2)) ** 2
        return abs(cross(self.v1, self.v2)) <= 1e-12 * max(size, 1e-300)

    def coords(self, z):
        """(λ1, λ2) of the point(s) z; NaN when degenerate."""
        z = np.asarray(z, dtype=complex) - self.anchor
        det = cross(self.v1, self.v2)
        if self.degenerate:
            nan = np.full(z.shape, np.nan)
            return nan, nan
        return cross(z, self.v2) / det, cross(self.v1, z) / det

    def contains(self, z, tol: float = 1e-12) -> np.ndarray:
        l1, l2 = self.coords(z)
        with np.errstate(invalid="ignore"):
            return (l1 >= -tol) & (l1 <= 1 + tol) & (l2 >= -tol) & (l2 <= 1 + tol)


def bounding_parallelogram(a: float, b: float) -> Parallelogram:
    """The published spanning vectors b - a + 2iab and i(a + b)², at (a, a²).

    These do not bound the arc in general (see parabola_arc_parallelogram);
    use arc_containment to check.
    """
    if not a < b:
        raise EmptyInterval(f"need a < b, got [{a}, {b}]")
    return Parallelogram(complex(a, a * a), complex(b - a, 2 * a * b), complex(0.0, (a + b) ** 2))


def parabola_arc_parallelogram(a: float, b: float) -> Parallelogram:
    """Image of the unit square under the subcurve map for [a, b].

    The arc over [0, 1] lies in the unit square, so its image, the arc of
    y = x² over [a, b], lies in this parallelogram: sides (d, 2ad), (0, d²).
    """
    m = parabola_subcurve_affine(a, b)
    (p, q), (r, s) = m.A
    return Parallelogram(m.offset, complex(p, r), complex(q, s))


def arc_containment(par: Parallelogram, a: float, b: float, n: int = 1001) -> bool:
    x = np.linspace(a, b, n)
    scale = max(1.0, abs(a), abs(b)) ** 2
    return bool(np.all(par.contains(x + 1j * x * x, tol=1e-12 * scale)))


# -- verification ----------------------------------------------------------

@dataclass(frozen=True)
class HsaReport:
    holds: bool
    witness_maps: tuple  # ((u0, u1), AffineMap, residual)
    max_residual: float
    classification: str  # line | parabola | neither
    diagnostics: dict = field(default_factory=dict)

    def rows(self):
        if not self.witness_maps:
            nan = math.nan
            yield (self.holds, self.classification, nan, nan, nan, nan, nan, nan, nan, nan, nan)
        for (u0, u1), F, r in self.witness_maps:
            (a11, a12), (a21, a22) = F.A
            yield (self.holds, self.classification, u0, u1, a11, a12, a21, a22,
                   F.b[0], F.b[1], r)


def _check_intervals(intervals):
    out = []
    for iv in intervals:
        u0, u1 = (float(v) for v in iv)
        if not u0 < u1:
            raise EmptyInterval(f"empty interval [{u0}, {u1}]")
        if u0 < 0 or u1 > 1:
            raise ValueError(f"interval [{u0}, {u1}] is outside [0, 1]")
        out.append((u0, u1))
    if not out:
        raise ValueError("need at least one interval")
    return out


def _line_witnesses(curve: Curve, intervals, t_of_u, n):
    """F = dilation about γ(0) by the chord ratio, then a translation."""
    alc = arc_length_reparam(curve)
    lo, hi = curve.domain
    z0 = curve(lo)
    chord = curve(hi) - z0
    t_grid = curve.grid(n)
    frac = lambda t: (alc.s_of_t(t) - alc.s_lo) / alc.s_all  # arc-length fraction

    def one(iv):
        t0, t1 = t_of_u(iv[0]), t_of_u(iv[1])
        p0 = curve(t0)
        lam = float(((curve(t1) - p0) / chord).real)
        off = p0 - lam * z0
        F = AffineMap([[lam, 0.0], [0.0, lam]], (off.real, off.imag))
        w0, w1 = frac(t0), frac(t1)
        sig = alc.t_of_s(alc.s_lo + alc.s_all * (w0 + (w1 - w0) * frac(t_grid)))
        return iv, F, float(np.max(np.abs(curve(sig) - F(curve(t_grid)))))

    return pmap(one, intervals)


def _parabola_normalization(ec: EquiaffineCurve, n: int):
    """Affine H with γ ≈ H(τ, τ²), τ the equiaffine arc length scaled to [0, 1].

    Along a parabola the equiaffine arc length is an affine function of the
    graph abscissa, so τ is the abscissa of a standard parabola in [0, 1].
    """
    curve = ec.underlying
    t = curve.grid(n)
    tau = (ec.sigma_of_t(t) - ec.sigma_lo) / ec.span
    z = curve(t)
    V = np.column_stack([np.ones_like(tau), tau, tau * tau])
    coef = np.linalg.lstsq(V, z, rcond=None)[0]
    p0, c1, c2 = coef
    H = AffineMap([[c1.real, c2.real], [c1.imag, c2.imag]], (p0.real, p0.imag))
    return H, float(np.max(np.abs(V @ coef - z)))


def _parabola_witnesses(ec: EquiaffineCurve, H: AffineMap, intervals, t_of_u, n):
    curve = ec.underlying
    Hinv = H.inverse()
    t_grid = curve.grid(n)
    tau = lambda t: (ec.sigma_of_t(t) - ec.sigma_lo) / ec.span
    tau_grid = tau(t_grid)

    def one(iv):
        tau0, tau1 = tau(t_of_u(iv[0])), tau(t_of_u(iv[1]))
        F = H @ parabola_subcurve_affine(tau0, tau1) @ Hinv
        target = tau0 + (tau1 - tau0) * tau_grid
        sig = ec.t_of_sigma(ec.sigma_lo + ec.span * target)
        return iv, F, float(np.max(np.abs(curve(sig) - F(curve(t_grid)))))

    return pmap(one, intervals)


def verify_hsa(curve: Curve, intervals, tol: float = 1e-8, n: int = 101) -> HsaReport:
    """Decide line / parabola / neither and check each subcurve witness.

    The curve domain is normalized to u in [0, 1].  Steps: tangent-winding
    screen, line test on curvature, parabola test on equiaffine curvature,
    then for each interval J a map F_J with γ(σ_J(t)) = F_J γ(t) checked at
    n parameters.  tol is relative to the curve diameter.
    """
    intervals = _check_intervals(intervals)
    lo, hi = curve.domain
    t_of_u = lambda u: lo + u * (hi - lo)
    diag = {}
    try:
        curve.check_regular()
    except CurveError as exc:
        return HsaReport(False, (), math.nan, "neither", {"error": str(exc)})
    if not winding_injectivity_check(curve):
        return HsaReport(False, (), math.nan, "neither", {"screen": "winding"})

    kmax = float(np.max(np.abs(curvature(curve, curve.grid(257))))) * curve.scale
    diag["max_kappa_scaled"] = kmax
    if kmax <= LINE_FLOOR:
        kind = "line"
        results = _line_witnesses(curve, intervals, t_of_u, n)
    else:
        try:
            ec = EquiaffineCurve(curve)
        except CurveError as exc:
            diag["error"] = str(exc)
            return HsaReport(False, (), math.nan, "neither", diag)
        mean, spread = kappa_sa_stats(ec)
        unit = curve.scale ** (4.0 / 3.0)
        diag["kappa_sa_unit"], diag["spread_unit"] = mean * unit, spread * unit
        if spread * unit > PARABOLA_SPREAD or conic_family(mean * unit, spread * unit) != "parabola":
            return HsaReport(False, (), math.nan, "neither", diag)
        H, fit_res = _parabola_normalization(ec, 4 * n + 1)
        diag["normalization_residual"] = fit_res
        if fit_res > tol * curve.scale:
            return HsaReport(False, (), math.nan, "neither", diag)
        kind = "parabola"
        results = _parabola_witnesses(ec, H, intervals, t_of_u, n)

    worst = max(r for _, _, r in results)
    nonsingular = all(abs(F.det) > 0 for _, F, _ in results)
    holds = bool(nonsingular and worst <= tol * curve.scale)
    return HsaReport(holds, tuple(results), worst, kind, diag)
