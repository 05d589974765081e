"""Planar curves, arc length, Euclidean curvature and affine actions.

Points of the plane are complex numbers (x + iy) throughout.  A curve exposes
its *jet*: the position and the first four parameter derivatives, stacked as a
complex array of shape ``(order + 1,) + t.shape``.  Fourth derivatives are
needed by the LCG gradient and by the equiaffine curvature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateCurve, InvalidSteps, SingularMatrix
from .quadrature import CumulativeIntegral, gauss_legendre

INFINITE_RADIUS = math.inf
MAX_ORDER = 4
SPEED_FLOOR = 1e-12
DET_FLOOR = 1e-12


def cross(a, b):
    """det(a, b) for complex-encoded plane vectors."""
    return (np.conj(a) * b).imag


def dot(a, b):
    return (np.conj(a) * b).real


def as_complex(xy) -> np.ndarray:
    xy = np.asarray(xy, dtype=float)
    return xy[..., 0] + 1j * xy[..., 1]


def as_xy(z) -> np.ndarray:
    z = np.asarray(z)
    return np.stack([z.real, z.imag], axis=-1)


@dataclass(frozen=True)
class AffineMap:
    """z -> A z + b with A a real 2x2 matrix and b a plane vector."""

    A: tuple
    b: tuple = (0.0, 0.0)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.shape != (2, 2):
            raise ValueError("A must be 2x2")
        object.__setattr__(self, "A", tuple(map(tuple, A.tolist())))
        object.__setattr__(self, "b", tuple(float(v) for v in np.ravel(self.b)))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.A)

    @property
    def offset(self) -> complex:
        return complex(self.b[0], self.b[1])

    @property
    def det(self) -> float:
        (a, b), (c, d) = self.A
        return a * d - b * c

    def linear(self, z):
        (a, b), (c, d) = self.A
        z = np.asarray(z)
        x, y = z.real, z.imag
        return (a * x + b * y) + 1j * (c * x + d * y)

    def __call__(self, z):
        return self.linear(z) + self.offset

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        A = self.matrix @ other.matrix
        b = self.matrix @ np.array(other.b) + np.array(self.b)
        return AffineMap(A, b)

    def inverse(self) -> "AffineMap":
        Ainv = np.linalg.inv(self.matrix)
        return AffineMap(Ainv, -Ainv @ np.array(self.b))

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(np.eye(2))


@dataclass(frozen=True)
class FrenetFrame:
    tangent: complex
    normal: complex


class Curve:
    """Base class.  Subclasses implement ``_jet(t, order)`` on 1-D arrays."""

    name = "curve"
    extendable = False  # can be evaluated outside `domain`
    kappa_floor = DET_FLOOR  # |kappa| * scale below this counts as zero

    def __init__(self, domain, base_point=None):
        lo, hi = float(domain[0]), float(domain[1])
        if not hi > lo:
            raise DegenerateCurve(f"empty parameter domain [{lo}, {hi}]")
        self.domain = (lo, hi)
        self.base_point = lo if base_point is None else float(base_point)
        if not lo <= self.base_point <= hi:
            raise ValueError("base_point must lie in the domain")

    def jet(self, t, order: int = MAX_ORDER) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = self._jet(np.atleast_1d(t).ravel(), order)
        return out.reshape((order + 1,) + t.shape)

    def _jet(self, t, order):
        raise NotImplementedError

    def __call__(self, t):
        return self.jet(t, 0)[0]

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(*self.domain, n)

    @cached_property
    def scale(self) -> float:
        """Bounding-box diagonal of the trace; the length scale for tolerances."""
        z = self(self.grid(257))
        span = math.hypot(np.ptp(z.real), np.ptp(z.imag))
        return span if span > 0 else 1.0

    def speed_floor(self) -> float:
        return SPEED_FLOOR * self.scale / (self.domain[1] - self.domain[0])

    def check_regular(self, n: int = 1025) -> None:
        speed = np.abs(self.jet(self.grid(n), 1)[1])
        if not np.all(speed > self.speed_floor()):
            bad = self.grid(n)[np.argmin(speed)]
            raise DegenerateCurve(f"|dγ/dt| vanishes near t = {bad:.6g}")


class AnalyticCurve(Curve):
    """A curve given by a closed-form jet function ``jet_fn(t, order)``."""

    extendable = True

    def __init__(self, jet_fn, domain, base_point=None, name="analytic", params=None):
        super().__init__(domain, base_point)
        self._jet_fn = jet_fn
        self.name = name
        self.params = dict(params or {})

    def _jet(self, t, order):
        return np.asarray(self._jet_fn(t, order), dtype=complex)[: order + 1]

    def __repr__(self):
        return f"AnalyticCurve({self.name!r}, {self.params}, domain={self.domain})"


def _stencil_weights(offsets, orders):
    """Finite-difference weights for derivatives 0..orders at offset 0.

    ``offsets`` has shape (n, w) in units of the local spacing.
    """
    n, w = offsets.shape
    powers = np.arange(w)
    V = offsets[:, None, :] ** powers[None, :, None]  # (n, m, j)
    rhs = np.zeros((w, orders + 1))
    for k in range(orders + 1):
        rhs[k, k] = math.factorial(k)
    return np.linalg.solve(V, np.broadcast_to(rhs, (n, w, orders + 1)))


class SampledCurve(Curve):
    """A curve known only at sample points.

    Derivatives come from local polynomial stencils of width ``stencil``
    around the query point (centred in the interior, one-sided at the ends).
    """

    extendable = False
    kappa_floor = 1e-8

    def __init__(self, t, x, y, stencil: int = 7, base_point=None):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if not (t.ndim == x.ndim == y.ndim == 1 and len(t) == len(x) == len(y)):
            raise ValueError("t, x, y must be 1-D arrays of equal length")
        if len(t) < stencil:
            raise ValueError(f"need at least {stencil} samples")
        if not np.all(np.isfinite(t) & np.isfinite(x) & np.isfinite(y)):
            raise ValueError("sample values must be finite")
        if not np.all(np.diff(t) > 0):
            raise ValueError("sample parameters must be strictly increasing")
        super().__init__((t[0], t[-1]), base_point)
        self.t = t
        self.z = x + 1j * y
        self.stencil = stencil
        self.name = "sampled"

    def _jet(self, t, requested):
        order = min(requested, self.stencil - 1)
        nodes = self.t
        i = np.clip(np.searchsorted(nodes, t), 1, len(nodes) - 1)
        nearest = np.where(t - nodes[i - 1] < nodes[i] - t, i - 1, i)
        start = np.clip(nearest - self.stencil // 2, 0, len(nodes) - self.stencil)
        idx = start[:, None] + np.arange(self.stencil)
        h = (nodes[idx[:, -1]] - nodes[idx[:, 0]]) / (self.stencil - 1)
        w = _stencil_weights((nodes[idx] - t[:, None]) / h[:, None], order)
        vals = np.einsum("nj,njk->kn", self.z[idx], w)
        vals /= h[None, :] ** np.arange(order + 1)[:, None]
        if order < requested:
            pad = np.zeros((requested - order,) + vals.shape[1:], dtype=complex)
            vals = np.concatenate([vals, pad])
        return vals

    def __repr__(self):
        return f"SampledCurve(n={len(self.t)}, stencil={self.stencil})"


class FrenetCurve(Curve):
    """Arc-length curve produced by integrating the Euclidean Frenet system.

    Between grid nodes the state is advanced by one RK4 step from the node
    below, so every evaluation carries the integrator's own accuracy.
    """

    extendable = False

    def __init__(self, s, z, T, N, kappa, dkappa, d2kappa, name="frenet", s_offset=0.0):
        super().__init__((s[0], s[-1]), s[0])
        self.s, self.z, self.T, self.N = s, z, T, N
        self.kappa, self.dkappa, self.d2kappa = kappa, dkappa, d2kappa
        self.name = name
        self.s_offset = s_offset  # curvature law argument = s + s_offset

    def _jet(self, t, order):
        k = np.clip(np.searchsorted(self.s, t, side="right") - 1, 0, len(self.s) - 2)
        z, T, N = _frenet_rk4(self.kappa, self.z[k], self.T[k], self.N[k], self.s[k], t - self.s[k])
        kap = self.kappa(t)
        out = np.zeros((MAX_ORDER + 1, len(t)), dtype=complex)
        out[0], out[1] = z, T
        if order >= 2:
            out[2] = kap * N
        if order >= 3:
            dk = self.dkappa(t)
            out[3] = dk * N - kap**2 * T
        if order >= 4:
            out[4] = self.d2kappa(t) * N - 3 * kap * dk * T - kap**3 * N
        return out[: order + 1]


def _frenet_rk4(kappa, z, T, N, s, h):
    """One classical RK4 step of z' = T, T' = kN, N' = -kT (vectorised)."""
    k1, k2, k4 = kappa(s), kappa(s + h / 2), kappa(s + h)
    dz1, dT1, dN1 = T, k1 * N, -k1 * T
    T2, N2 = T + h / 2 * dT1, N + h / 2 * dN1
    dz2, dT2, dN2 = T2, k2 * N2, -k2 * T2
    T3, N3 = T + h / 2 * dT2, N + h / 2 * dN2
    dz3, dT3, dN3 = T3, k2 * N3, -k2 * T3
    T4, N4 = T + h * dT3, N + h * dN3
    dz4, dT4, dN4 = T4, k4 * N4, -k4 * T4
    return (
        z + h / 6 * (dz1 + 2 * dz2 + 2 * dz3 + dz4),
        T + h / 6 * (dT1 + 2 * dT2 + 2 * dT3 + dT4),
        N + h / 6 * (dN1 + 2 * dN2 + 2 * dN3 + dN4),
    )


class AffineCurve(Curve):
    def __init__(self, base: Curve, amap: AffineMap):
        super().__init__(base.domain, base.base_point)
        self.base = base
        self.map = amap
        self.extendable = base.extendable
        self.kappa_floor = base.kappa_floor
        self.name = base.name

    def _jet(self, t, order):
        out = self.map.linear(self.base._jet(t, order))
        out[0] += self.map.offset
        return out


def _vectorised(fn, x):
    x = np.asarray(x, dtype=float)
    out = fn(np.atleast_1d(x).ravel())
    return out.reshape(x.shape) if x.ndim else out[0]


def curvature(curve: Curve, t):
    """Signed Euclidean curvature det(γ', γ'') / |γ'|^3."""
    def f(t):
        j = curve.jet(t, 2)
        return cross(j[1], j[2]) / np.abs(j[1]) ** 3
    return _vectorised(f, t)


def curvature_radius(curve: Curve, t):
    """Signed radius |γ'|^3 / det(γ', γ''); INFINITE_RADIUS where det vanishes."""
    def f(t):
        j = curve.jet(t, 2)
        speed3 = np.abs(j[1]) ** 3
        d = cross(j[1], j[2])
        flat = np.abs(d) * curve.scale <= curve.kappa_floor * speed3
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = speed3 / d
        return np.where(flat, INFINITE_RADIUS, rho)
    return _vectorised(f, t)


def curvature_jet(curve: Curve, t):
    """(κ, dκ/ds, d²κ/ds²) at parameter values t, from the curve's own jet."""
    t = np.asarray(t, dtype=float)
    j = curve.jet(np.atleast_1d(t).ravel(), 4)
    d1, d2, d3, d4 = j[1], j[2], j[3], j[4]
    v = np.abs(d1)
    v1 = dot(d1, d2) / v
    v2 = (np.abs(d2) ** 2 + dot(d1, d3)) / v - v1**2 / v
    D = cross(d1, d2)
    D1 = cross(d1, d3)
    D2 = cross(d2, d3) + cross(d1, d4)
    kap = D / v**3
    kdot = D1 / v**3 - 3 * D * v1 / v**4
    kddot = D2 / v**3 - 6 * D1 * v1 / v**4 - 3 * D * v2 / v**4 + 12 * D * v1**2 / v**5
    ks = kdot / v
    kss = (kddot * v - kdot * v1) / v**3
    out = np.stack([kap, ks, kss])
    return out.reshape((3,) + t.shape)


def frenet_frame(curve: Curve, t) -> FrenetFrame:
    d1 = curve.jet(float(t), 1)[1]
    tangent = complex(d1 / abs(d1))
    return FrenetFrame(tangent, 1j * tangent)


class ArcLengthCurve:
    """A curve together with its arc-length reparameterization s(t), s(η) = 0."""

    def __init__(self, curve: Curve, tol: float = 1e-10):
        self.curve = curve
        self.tol = tol
        lo, hi = curve.domain
        self._speed = lambda t: np.abs(curve.jet(t, 1)[1])
        self._cum = CumulativeIntegral(self._speed, lo, hi, tol)
        self._s_base = self._cum(curve.base_point)
        self.s_all = self._cum.total
        self.s_lo = -self._s_base
        self.s_hi = self.s_all - self._s_base
        self._knots_s = self._cum.cumulative - self._s_base

    def s_of_t(self, t):
        return self._cum(t) - self._s_base

    def t_of_s(self, s):
        s = np.asarray(s, dtype=float)
        flat = np.clip(np.atleast_1d(s).ravel(), self.s_lo, self.s_hi)
        lo, hi = self.curve.domain
        t = np.interp(flat, self._knots_s, self._cum.knots)
        for _ in range(30):
            step = (self.s_of_t(t) - flat) / self._speed(t)
            t = np.clip(t - step, lo, hi)
            if np.max(np.abs(step)) <= 1e-15 * (hi - lo):
                break
        return t.reshape(s.shape) if s.ndim else float(t[0])

    def point(self, s):
        return self.curve(self.t_of_s(s))

    def radius(self, s):
        return curvature_radius(self.curve, self.t_of_s(s))

    def kappa(self, s):
        return curvature(self.curve, self.t_of_s(s))

    def kappa_jet(self, s):
        return curvature_jet(self.curve, self.t_of_s(s))

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.s_lo, self.s_hi, n)

    def unit_speed_defect(self, n: int = 64) -> float:
        """Max relative gap between s-increments and an independent length rule."""
        t = self.curve.grid(n + 1)
        ds = np.diff(self.s_of_t(t))
        ref = gauss_legendre(self._speed, t[:-1], t[1:])
        return float(np.max(np.abs(ds / ref - 1.0)))


def arc_length_reparam(curve: Curve, tol: float = 1e-10) -> ArcLengthCurve:
    curve.check_regular()
    return ArcLengthCurve(curve, tol)


def _fd_derivative(f, h):
    return lambda s: (f(s + h) - f(s - h)) / (2 * h)


def reconstruct_from_curvature(kappa, s_all: float, steps: int = 10_000,
                               dkappa=None, d2kappa=None, name="frenet",
                               s_offset: float = 0.0) -> FrenetCurve:
    """Integrate Φ' = Φ [[0, -κ], [κ, 0]] from γ(0) = 0, γ'(0) = 1 with RK4.

    ``kappa`` must accept numpy arrays.  ``dkappa``/``d2kappa`` are optional
    exact derivatives; without them central differences are used.
    """
    if steps < 100:
        raise InvalidSteps(f"steps must be >= 100, got {steps}")
    if not s_all > 0:
        raise ValueError("s_all must be positive")
    kfun = lambda s: np.asarray(kappa(s), dtype=float) * np.ones_like(s, dtype=float)
    fd_h = 1e-4 * s_all
    dk = dkappa or _fd_derivative(kfun, fd_h)
    d2k = d2kappa or _fd_derivative(dk, fd_h)
    dkfun = lambda s: np.asarray(dk(s), dtype=float) * np.ones_like(s, dtype=float)
    d2kfun = lambda s: np.asarray(d2k(s), dtype=float) * np.ones_like(s, dtype=float)

    s = np.linspace(0.0, s_all, steps + 1)
    h = s_all / steps
    k_node = kfun(s).tolist()
    k_mid = kfun(s[:-1] + h / 2).tolist()
    z = np.empty(steps + 1, dtype=complex)
    T = np.empty(steps + 1, dtype=complex)
    N = np.empty(steps + 1, dtype=complex)
    zc, Tc, Nc = 0j, 1 + 0j, 1j
    z[0], T[0], N[0] = zc, Tc, Nc
    for i in range(steps):
        k1, k2, k4 = k_node[i], k_mid[i], k_node[i + 1]
        dT1, dN1 = k1 * Nc, -k1 * Tc
        T2, N2 = Tc + h / 2 * dT1, Nc + h / 2 * dN1
        dT2, dN2 = k2 * N2, -k2 * T2
        T3, N3 = Tc + h / 2 * dT2, Nc + h / 2 * dN2
        dT3, dN3 = k2 * N3, -k2 * T3
        T4, N4 = Tc + h * dT3, Nc + h * dN3
        dT4, dN4 = k4 * N4, -k4 * T4
        zc = zc + h / 6 * (Tc + 2 * T2 + 2 * T3 + T4)
        Tc = Tc + h / 6 * (dT1 + 2 * dT2 + 2 * dT3 + dT4)
        Nc = Nc + h / 6 * (dN1 + 2 * dN2 + 2 * dN3 + dN4)
        z[i + 1], T[i + 1], N[i + 1] = zc, Tc, Nc
    return FrenetCurve(s, z, T, N, kfun, dkfun, d2kfun, name=name, s_offset=s_offset)


def apply_affine(curve: Curve, amap: AffineMap) -> AffineCurve:
    scale = max(1.0, float(np.max(np.abs(amap.matrix)))) ** 2
    if abs(amap.det) <= 1e-12 * scale:
        raise SingularMatrix(f"det A = {amap.det:.3g}")
    return AffineCurve(curve, amap)


def tangent_angle(curve: Curve, t) -> np.ndarray:
    """Continuous (unwrapped) tangent angle along increasing t."""
    return np.unwrap(np.angle(curve.jet(t, 1)[1]))


def winding_injectivity_check(curve: Curve, n: int = 512) -> bool:
    """True when the slope dy/dx can be injective along the curve.

    That needs a monotone tangent angle sweeping less than π; a curve that
    winds (or wiggles through an inflection) fails.  Lines pass trivially.
    """
    theta = tangent_angle(curve, curve.grid(n))
    step = np.diff(theta)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(theta))))
    monotone = np.all(step >= -tol) or np.all(step <= tol)
    return bool(monotone and np.ptp(theta) < math.pi)
