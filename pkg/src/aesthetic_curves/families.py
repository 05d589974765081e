"""Closed-form curve families with exact jets up to the fourth derivative."""
from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import fresnel

from .core import AnalyticCurve, MAX_ORDER
from .errors import InvalidParams


def _stack(*rows):
    return np.stack([np.asarray(r, dtype=complex) for r in rows])


def circle(radius=1.0, center=0j, domain=(0.0, 2 * math.pi), base_point=None):
    """radius * e^{it} + center."""
    if radius <= 0:
        raise InvalidParams("circle radius must be positive")
    c = complex(center)

    def jet(t, order):
        e = radius * np.exp(1j * t)
        return _stack(e + c, 1j * e, -e, -1j * e, e)

    return AnalyticCurve(jet, domain, base_point, "circle", {"r": radius})


def line(start=0j, direction=1 + 0j, domain=(0.0, 1.0), base_point=None):
    p0, v = complex(start), complex(direction)
    if v == 0:
        raise InvalidParams("line direction must be nonzero")

    def jet(t, order):
        zero = np.zeros_like(t)
        return _stack(p0 + v * t, v + zero, zero, zero, zero)

    return AnalyticCurve(jet, domain, base_point, "line", {"start": p0, "direction": v})


def parabola(a=1.0, b=1.0, domain=(0.0, 1.0), base_point=None):
    """a t + i b t^2  (a = 5, b = 1 on [0, 5] is the LCH showcase curve)."""
    if a == 0 or b == 0:
        raise InvalidParams("parabola needs a != 0 and b != 0")

    def jet(t, order):
        zero = np.zeros_like(t)
        return _stack(a * t + 1j * b * t**2, a + 2j * b * t, 2j * b + zero, zero, zero)

    return AnalyticCurve(jet, domain, base_point, "parabola", {"a": a, "b": b})


def ellipse(A=1.0, B=1.0, domain=(0.0, 2 * math.pi), base_point=None):
    """(A cos t, B sin t)."""
    if A <= 0 or B <= 0:
        raise InvalidParams("ellipse semi-axes must be positive")

    def jet(t, order):
        c, s = np.cos(t), np.sin(t)
        return _stack(A * c + 1j * B * s, -A * s + 1j * B * c, -A * c - 1j * B * s,
                      A * s - 1j * B * c, A * c + 1j * B * s)

    return AnalyticCurve(jet, domain, base_point, "ellipse", {"A": A, "B": B})


def hyperbola(A=1.0, B=1.0, domain=(-1.0, 1.0), base_point=None):
    """(A cosh t, B sinh t), the right branch."""
    if A <= 0 or B <= 0:
        raise InvalidParams("hyperbola semi-axes must be positive")

    def jet(t, order):
        ch, sh = np.cosh(t), np.sinh(t)
        even, odd = A * ch + 1j * B * sh, A * sh + 1j * B * ch
        return _stack(even, odd, even, odd, even)

    return AnalyticCurve(jet, domain, base_point, "hyperbola", {"A": A, "B": B})


def log_spiral(a=1.0, b=1.0, domain=(0.0, 1.0), base_point=None):
    """e^{(a + ib) t}.

    Arc length from t = 0 is s = (|c| / a)(e^{at} - 1) and the radius of
    curvature is rho = (a / b) s + |c| / b with c = a + ib, so the curve is a
    log-aesthetic curve with alpha = 1, xi = a / b, eta = |c| / b.
    """
    if a == 0 or b == 0:
        raise InvalidParams("log spiral needs a != 0 and b != 0")
    c = complex(a, b)

    def jet(t, order):
        e = np.exp(c * t)
        return _stack(e, c * e, c**2 * e, c**3 * e, c**4 * e)

    return AnalyticCurve(jet, domain, base_point, "log_spiral", {"a": a, "b": b})


def log_spiral_lac_params(a: float, b: float):
    """(alpha, xi, eta) of e^{(a+ib)t} measured from t = 0."""
    mod = math.hypot(a, b)
    return 1.0, a / b, mod / b


def clothoid(a=1.0, domain=(0.0, 1.0), base_point=None):
    """Integral of e^{i a u^2} from 0 to t; unit speed, curvature 2 a t."""
    if a == 0:
        raise InvalidParams("clothoid needs a != 0")
    k = math.sqrt(2 * abs(a) / math.pi)
    sgn = math.copysign(1.0, a)

    def jet(t, order):
        S, C = fresnel(k * t)
        z = (C + 1j * sgn * S) / k
        e = np.exp(1j * a * t**2)
        return _stack(z, e, 2j * a * t * e, (2j * a - 4 * a**2 * t**2) * e,
                      (-12 * a**2 * t - 8j * a**3 * t**3) * e)

    return AnalyticCurve(jet, domain, base_point, "clothoid", {"a": a})


def sine(amplitude=1.0, frequency=1.0, domain=(0.0, math.pi), base_point=None):
    """Graph of amplitude * sin(frequency * t)."""
    A, w = amplitude, frequency

    def jet(t, order):
        s, c = np.sin(w * t), np.cos(w * t)
        one, zero = np.ones_like(t), np.zeros_like(t)
        return _stack(t + 1j * A * s, one + 1j * A * w * c, zero - 1j * A * w**2 * s,
                      zero - 1j * A * w**3 * c, zero + 1j * A * w**4 * s)

    return AnalyticCurve(jet, domain, base_point, "sine", {"amplitude": A, "frequency": w})


def polynomial(cx, cy, domain=(0.0, 1.0), base_point=None, name="polynomial"):
    """(Px(t), Py(t)) for coefficient lists in increasing degree."""
    px, py = Polynomial(cx), Polynomial(cy)
    derivs = [(px.deriv(k), py.deriv(k)) for k in range(MAX_ORDER + 1)]

    def jet(t, order):
        return _stack(*(dx(t) + 1j * dy(t) for dx, dy in derivs))

    return AnalyticCurve(jet, domain, base_point, name, {"cx": list(cx), "cy": list(cy)})


def cubic_bezier(p0, p1, p2, p3, domain=(0.0, 1.0)):
    """Cubic Bezier through complex control points, as a polynomial curve."""
    p = [complex(v) for v in (p0, p1, p2, p3)]
    coeffs = [p[0], 3 * (p[1] - p[0]), 3 * (p[2] - 2 * p[1] + p[0]),
              p[3] - 3 * p[2] + 3 * p[1] - p[0]]
    return polynomial([c.real for c in coeffs], [c.imag for c in coeffs], domain,
                      name="bezier")
