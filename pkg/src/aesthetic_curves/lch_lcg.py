"""Logarithmic curvature histogram (LCH) and graph (LCG).

The LCH bins the arc length of a curve against X = log(rho).  The LCG is its
continuous limit, the trace (X, Y) = (log rho, log |ds/dX|); on a
log-aesthetic curve it is a straight line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ._parallel import pmap
from .core import ArcLengthCurve, INFINITE_RADIUS
from .errors import (DegenerateRange, InfiniteRadius, NonMonotoneRadius,
                     StationaryRadius)

RANGE_FLOOR = 1e-9
STATIONARY_FLOOR = 1e-9  # on |d rho / ds|, which is dimensionless
SCAN_POINTS = 512


@dataclass(frozen=True)
class LCHistogram:
    M: int
    N: int
    s_all: float
    x_min: float
    x_max: float
    counts: np.ndarray = field(repr=False)

    @property
    def width(self) -> float:
        return (self.x_max - self.x_min) / self.M

    @property
    def edges(self) -> np.ndarray:
        return self.x_min + self.width * np.arange(self.M + 1)

    @property
    def x_left(self) -> np.ndarray:
        return self.edges[:-1]

    @property
    def empty(self) -> np.ndarray:
        return self.counts == 0

    @property
    def density(self) -> np.ndarray:
        """Step height e^{Y_i} of every bin, 0 for empty bins."""
        return self.counts * (self.s_all / self.N) / self.width

    @property
    def y(self) -> np.ndarray:
        """Y_i = log(Δs_i / ΔX_i); NaN marks an empty bin."""
        with np.errstate(divide="ignore"):
            return np.where(self.empty, np.nan, np.log(self.density))

    @property
    def mass(self) -> float:
        return float(self.counts.sum() * self.s_all / self.N)

    def measure(self, a: float, b: float) -> float:
        """Mass the step density assigns to [a, b)."""
        lo = np.clip(self.edges[:-1], a, b)
        hi = np.clip(self.edges[1:], a, b)
        return float(np.sum(self.density * np.maximum(hi - lo, 0.0)))

    def rows(self):
        for i, (x, c, y) in enumerate(zip(self.x_left, self.counts, self.y)):
            yield self.M, self.N, i, float(x), ("empty" if c == 0 else float(y))


def compute_lch(curve: ArcLengthCurve, M: int, N: int) -> LCHistogram:
    """Histogram of log curvature radius over N equal-length pieces, M bins.

    Each of the N pieces of length s_all/N is filed under the bin holding
    log rho at its initial point; the bin range is set by all N + 1 division
    points.  Bins are half-open except the last, which is closed.
    """
    if M < 2 or N < M:
        raise ValueError(f"need M >= 2 and N >= M, got M={M}, N={N}")
    s = curve.s_lo + curve.s_all * np.arange(N + 1) / N
    rho = np.abs(curve.radius(s))
    if np.any(rho == INFINITE_RADIUS) or np.any(rho == 0):
        j = int(np.argmax((rho == INFINITE_RADIUS) | (rho == 0)))
        raise InfiniteRadius(f"rho is not finite and nonzero at division point j={j}")
    X = np.log(rho)
    x_min, x_max = float(X.min()), float(X.max())
    if x_max - x_min <= RANGE_FLOOR * max(1.0, abs(x_min)):
        raise DegenerateRange("log curvature radius is (numerically) constant")
    width = (x_max - x_min) / M
    idx = np.clip(np.floor((X[:-1] - x_min) / width).astype(int), 0, M - 1)
    counts = np.bincount(idx, minlength=M)
    return LCHistogram(M, N, curve.s_all, x_min, x_max, counts)


@dataclass(frozen=True)
class LCGPlot:
    """Sampled LCG trace.  ``degenerate`` marks constant-radius curves."""

    s: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    gradient: np.ndarray
    segment: np.ndarray
    monotone_segments: tuple
    degenerate: bool = False

    def rows(self):
        for row in zip(self.s, self.X, self.Y, self.gradient):
            yield tuple(float(v) for v in row)

    def trace(self, k: int):
        m = self.segment == k
        return self.s[m], self.X[m], self.Y[m], self.gradient[m]


def _rho_s(curve: ArcLengthCurve, s):
    """d rho / ds (sign of rho ignored: this is d|rho|/ds)."""
    k, ks, _ = curve.kappa_jet(s)
    with np.errstate(divide="ignore", invalid="ignore"):
        return -np.sign(k) * ks / k**2


def _split_points(curve: ArcLengthCurve):
    """Interior arc-length positions where |rho| stops being monotone."""
    s = curve.grid(SCAN_POINTS)
    kap = lambda u: curve.kappa_jet(u)[0]
    kap_s = lambda u: curve.kappa_jet(u)[1]
    floor_k = curve.curve.kappa_floor / curve.curve.scale
    cuts = []
    for fn, floor in ((kap, floor_k), (kap_s, 0.0)):
        v = fn(s)
        v = np.where(np.abs(v) <= floor, 0.0, v)
        sign = np.sign(v)
        for i in range(len(s) - 1):
            if sign[i] * sign[i + 1] < 0:
                cuts.append(brentq(lambda u: float(fn(u)), s[i], s[i + 1], xtol=1e-14))
            elif sign[i + 1] == 0 and 0 < i + 1 < len(s) - 1:
                cuts.append(float(s[i + 1]))
    return sorted(set(cuts))


def monotone_segments(curve: ArcLengthCurve):
    s = curve.grid(SCAN_POINTS)
    rho_s = np.abs(_rho_s(curve, s))
    if not np.any(np.isfinite(rho_s) & (rho_s > STATIONARY_FLOOR)):
        return []
    cuts = _split_points(curve)
    bounds = [curve.s_lo] + cuts + [curve.s_hi]
    return [(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b - a > 1e-12 * curve.s_all]


def compute_lcg(curve: ArcLengthCurve, n_samples: int = 256) -> LCGPlot:
    """Sample the LCG on every piece where rho is strictly monotone.

    Samples sit at the midpoints of n_samples equal arc-length cells per
    piece, which keeps them off stationary points at piece boundaries.
    A circle or line comes back as a degenerate plot with no samples.
    """
    if n_samples < 16:
        raise ValueError("n_samples must be >= 16")
    segs = monotone_segments(curve)
    if not segs:
        empty = np.empty(0)
        return LCGPlot(empty, empty, empty, empty, np.empty(0, dtype=int), (), True)
    parts = []
    for k, (a, b) in enumerate(segs):
        s = a + (b - a) * (np.arange(n_samples) + 0.5) / n_samples
        kap, ks, kss = curve.kappa_jet(s)
        with np.errstate(divide="ignore"):
            X = -np.log(np.abs(kap))
            Y = np.log(np.abs(kap / ks))
        grad = kap * kss / ks**2 - 1.0
        parts.append((s, X, Y, grad, np.full(n_samples, k)))
    cols = [np.concatenate(c) for c in zip(*parts)]
    return LCGPlot(*cols, monotone_segments=tuple(segs))


def lcg_gradient(curve: ArcLengthCurve, s) -> float:
    """dY/dX = 1 - rho rho'' / rho'^2, written through kappa = 1/rho."""
    kap, ks, kss = curve.kappa_jet(float(s))
    if abs(kap) * curve.curve.scale <= curve.curve.kappa_floor:
        raise StationaryRadius(f"rho is infinite at s={s}")
    if abs(ks) / kap**2 <= STATIONARY_FLOOR:
        raise StationaryRadius(f"rho' vanishes at s={s}")
    return float(kap * kss / ks**2 - 1.0)


class ExactLCGDensity:
    """The LCG measure e^Y dX of a curve with monotone rho, for reference."""

    def __init__(self, curve: ArcLengthCurve, n_table: int = 2049):
        self.curve = curve
        s = curve.grid(n_table)
        self._s = s
        self._X = np.log(np.abs(curve.radius(s)))
        self.increasing = bool(self._X[-1] > self._X[0])
        self.x_min, self.x_max = float(self._X.min()), float(self._X.max())

    def s_of_x(self, x):
        """Arc length where log|rho| = x (x clipped to the range)."""
        x = np.clip(np.asarray(x, dtype=float), self.x_min, self.x_max)
        Xs, Ss = (self._X, self._s) if self.increasing else (self._X[::-1], self._s[::-1])
        s = np.interp(x, Xs, Ss)
        for _ in range(20):
            kap, ks, _ = self.curve.kappa_jet(s)
            dXds = -ks / kap
            step = (np.log(np.abs(1.0 / kap)) - x) / dXds
            s = np.clip(s - np.where(np.isfinite(step), step, 0.0), self.curve.s_lo, self.curve.s_hi)
            if np.all(np.abs(step[np.isfinite(step)]) < 1e-14 * self.curve.s_all):
                break
        return s

    def density(self, x):
        kap, ks, _ = self.curve.kappa_jet(self.s_of_x(x))
        with np.errstate(divide="ignore"):
            return np.abs(kap / ks)

    def measure(self, a: float, b: float) -> float:
        lo, hi = max(a, self.x_min), min(b, self.x_max)
        if hi <= lo:
            return 0.0
        sa, sb = self.s_of_x(np.array([lo, hi]))
        return float(abs(sb - sa))


_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def tv_distance(hist: LCHistogram, exact: ExactLCGDensity, sub: int = 4) -> float:
    """L1 distance between the LCH step density and the exact LCG density."""
    edges = np.linspace(hist.x_min, hist.x_max, hist.M * sub + 1)
    lo, hi = edges[:-1], edges[1:]
    x = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * _GL_X
    step = np.repeat(hist.density, sub)[:, None]
    g = exact.density(x.ravel()).reshape(x.shape)
    return float(np.sum(0.5 * (hi - lo) * (np.abs(step - g) @ _GL_W)))


@dataclass(frozen=True)
class ConvergenceRow:
    M: int
    N: int
    interval_error: float
    tv_error: float


@dataclass(frozen=True)
class ConvergenceReport:
    interval: tuple
    rows: tuple

    @property
    def decreasing(self) -> bool:
        e = [r.interval_error for r in self.rows]
        return all(b < a for a, b in zip(e, e[1:]))

    @property
    def tv_decreasing(self) -> bool:
        e = [r.tv_error for r in self.rows]
        return all(b < a for a, b in zip(e, e[1:]))


def require_monotone(curve: ArcLengthCurve):
    segs = monotone_segments(curve)
    if len(segs) != 1:
        raise NonMonotoneRadius(f"rho is monotone on {len(segs)} pieces, need exactly 1")


def convergence_report(curve: ArcLengthCurve, grid, interval=None) -> ConvergenceReport:
    """Error of the LCH measure against the LCG measure along a grid of (M, N)."""
    require_monotone(curve)
    exact = ExactLCGDensity(curve)
    a, b = interval if interval is not None else (exact.x_min, exact.x_max)
    if b == exact.x_max:
        b = math.nextafter(b, math.inf)  # make [a, b) cover the closed top bin
    target = exact.measure(a, b)

    def one(mn):
        M, N = mn
        hist = compute_lch(curve, M, N)
        return ConvergenceRow(M, N, abs(hist.measure(a, b) - target), tv_distance(hist, exact))

    return ConvergenceReport((a, b), tuple(pmap(one, [tuple(g) for g in grid])))
