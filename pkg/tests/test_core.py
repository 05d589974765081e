import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from aesthetic_curves import families as F
from aesthetic_curves.core import (INFINITE_RADIUS, AffineMap, SampledCurve, apply_affine,
                                   arc_length_reparam, curvature, curvature_jet,
                                   curvature_radius, frenet_frame, reconstruct_from_curvature,
                                   winding_injectivity_check)
from aesthetic_curves.errors import DegenerateCurve, InvalidSteps, SingularMatrix
from aesthetic_curves.hsa_affine import parabola_subcurve_affine


def fresnel_oracle(upper=1.0):
    c = quad(lambda u: math.cos(u * u), 0, upper, epsabs=1e-13, epsrel=1e-13)[0]
    s = quad(lambda u: math.sin(u * u), 0, upper, epsabs=1e-13, epsrel=1e-13)[0]
    return complex(c, s)


# -- arc length -------------------------------------------------------------

def test_unit_circle_arc_length():
    alc = arc_length_reparam(F.circle())
    t = np.linspace(0, 2 * math.pi, 50)
    assert np.max(np.abs(alc.s_of_t(t) - t)) < 1e-12
    assert alc.s_all == pytest.approx(2 * math.pi, rel=1e-14)


def test_segment_speed_two():
    alc = arc_length_reparam(F.line(0, 2))
    assert alc.s_all == pytest.approx(2.0, rel=1e-15)
    assert alc.s_of_t(0.3) == pytest.approx(0.6, rel=1e-14)


def test_base_point_is_zero_of_arc_length():
    alc = arc_length_reparam(F.parabola(5, 1, (0, 5), base_point=2.0))
    assert alc.s_of_t(2.0) == 0.0
    assert alc.s_lo < 0 < alc.s_hi


def test_arc_length_matches_quad_oracle():
    c = F.parabola(5, 1, (0, 5))
    ref = quad(lambda t: math.hypot(5, 2 * t), 0, 5, epsabs=1e-13, epsrel=1e-13)[0]
    assert arc_length_reparam(c).s_all == pytest.approx(ref, rel=1e-12)


def test_t_of_s_inverts():
    alc = arc_length_reparam(F.ellipse(3, 1))
    s = alc.grid(41)
    assert np.max(np.abs(alc.s_of_t(alc.t_of_s(s)) - s)) < 1e-12


def test_unit_speed_checkpoints():
    assert arc_length_reparam(F.ellipse(2, 1)).unit_speed_defect() < 1e-10


def test_reconstructed_clothoid_is_unit_speed():
    c = reconstruct_from_curvature(lambda s: 2 * s, 1.0, 10_000)
    alc = arc_length_reparam(c, tol=1e-9)
    t = np.linspace(0, 1, 21)
    assert np.max(np.abs(alc.s_of_t(t) - t)) < 1e-9


def test_degenerate_parameterization_rejected():
    c = F.polynomial([0, 0, 0, 1], [0, 0, 1], (-1, 1))  # (t^3, t^2) stops at 0
    with pytest.raises(DegenerateCurve):
        arc_length_reparam(c)


# -- curvature --------------------------------------------------------------

def test_circle_radius_two():
    assert np.allclose(curvature_radius(F.circle(2), np.linspace(0, 6, 9)), 2.0, rtol=1e-14)


def test_parabola_radius_at_origin():
    assert curvature_radius(F.parabola(5, 1), 0.0) == pytest.approx(12.5, rel=1e-15)
    assert math.exp(1.5 * math.log(25) - math.log(10)) == pytest.approx(12.5)


def test_log_spiral_radius_at_origin():
    assert curvature_radius(F.log_spiral(1, 1), 0.0) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_inflection_gives_infinite_sentinel():
    assert curvature_radius(F.sine(), math.pi) == INFINITE_RADIUS
    assert curvature_radius(F.line(), 0.5) == INFINITE_RADIUS


def test_signed_curvature_follows_orientation():
    assert curvature(F.circle(), 1.0) > 0
    cw = F.polynomial([0, 1], [0, 0, -1])
    assert curvature(cw, 0.5) < 0


def test_curvature_jet_of_clothoid():
    # κ(s) = 2 s for the unit-speed clothoid
    k, ks, kss = curvature_jet(F.clothoid(1.0, (0.1, 2.0)), np.array([0.5, 1.5]))
    assert np.allclose(k, [1.0, 3.0], rtol=1e-13)
    assert np.allclose(ks, 2.0, rtol=1e-12)
    assert np.allclose(kss, 0.0, atol=1e-11)


def test_frenet_frame_is_positive_orthonormal():
    fr = frenet_frame(F.ellipse(3, 1), 0.7)
    assert abs(fr.tangent) == pytest.approx(1.0)
    assert fr.normal == pytest.approx(1j * fr.tangent)


# -- closed-form family oracles ----------------------------------------------

def test_log_spiral_arc_length_law():
    # s = (|c|/a)(e^{at} - 1); the printed |c|(e^{at} - 1) is only right for a = 1
    a, b = 0.3, 1.7
    alc = arc_length_reparam(F.log_spiral(a, b, (0, 2)))
    t = np.linspace(0, 2, 11)
    s_law = math.hypot(a, b) / a * np.expm1(a * t)
    assert np.max(np.abs(alc.s_of_t(t) - s_law)) < 1e-11
    _, xi, eta = F.log_spiral_lac_params(a, b)
    rho = curvature_radius(alc.curve, t)
    assert np.max(np.abs(rho - (xi * s_law + eta))) < 1e-12


def test_clothoid_radius_law():
    # the integrand e^{iau^2} gives rho = 1/(2 a s)
    a = 0.7
    c = F.clothoid(a, (0.1, 2.0))
    s = np.linspace(0.1, 2.0, 9)
    assert np.allclose(curvature_radius(c, s), 1 / (2 * a * s), rtol=1e-13)
    ref = complex(*[quad(f, 0, 1.3, epsabs=1e-14)[0] for f in
                    (lambda u: math.cos(a * u * u), lambda u: math.sin(a * u * u))])
    assert abs(c(1.3) - ref) < 1e-13


# -- reconstruction -----------------------------------------------------------

def test_zero_curvature_gives_segment():
    c = reconstruct_from_curvature(lambda s: 0 * s, 3.0, 1000)
    assert abs(c(3.0) - 3.0) < 1e-14


def test_unit_curvature_closes():
    c = reconstruct_from_curvature(lambda s: 1 + 0 * s, 2 * math.pi, 10_000)
    assert abs(c(2 * math.pi)) < 1e-8


def test_clothoid_endpoint_against_fresnel_quadrature():
    c = reconstruct_from_curvature(lambda s: 2 * s, 1.0, 10_000)
    assert abs(c(1.0) - fresnel_oracle()) < 1e-8


def test_reconstruction_round_trip():
    kap = lambda s: 1 + 0.5 * np.sin(3 * s)
    c = reconstruct_from_curvature(kap, 2.0, 10_000, dkappa=lambda s: 1.5 * np.cos(3 * s))
    s = np.linspace(0, 2, 101)
    assert np.max(np.abs(curvature_radius(c, s) - 1 / kap(s))) < 1e-6


def test_too_few_steps():
    with pytest.raises(InvalidSteps):
        reconstruct_from_curvature(lambda s: s, 1.0, 99)


# -- affine action ------------------------------------------------------------

def affine_law(curve, amap, t):
    d1 = curve.jet(t, 1)[1]
    d1 = d1 / np.abs(d1)  # the law is stated for the arc-length tangent
    return np.abs(amap.linear(d1)) ** 3 * curvature_radius(curve, t) / amap.det


def test_identity_map():
    c = F.parabola(5, 1, (0, 5))
    t = np.linspace(0, 5, 11)
    img = apply_affine(c, AffineMap.identity())
    assert np.array_equal(curvature_radius(img, t), curvature_radius(c, t))


def test_scalar_map_on_circle():
    img = apply_affine(F.circle(), AffineMap([[3, 0], [0, 3]]))
    assert np.allclose(curvature_radius(img, np.linspace(0, 6, 7)), 3.0, rtol=1e-14)


def test_subcurve_map_matches_subcurve_radii():
    std = F.polynomial([0, 1], [0, 0, 1], (0, 1))
    m = parabola_subcurve_affine(0.0, 0.5)
    img = apply_affine(std, m)
    t = np.linspace(0, 1, 50)
    sub = F.polynomial([0, 1], [0, 0, 1], (-1, 2))
    # the image at t is the parabola at 0.5 t, traversed at half speed
    assert np.allclose(img(t), sub(0.5 * t), atol=1e-15)
    assert np.max(np.abs(curvature_radius(img, t) / curvature_radius(sub, 0.5 * t) - 1)) < 1e-9


def test_singular_matrix_rejected():
    with pytest.raises(SingularMatrix):
        apply_affine(F.circle(), AffineMap([[1, 2], [2, 4]]))


mats = st.tuples(*[st.floats(-3, 3) for _ in range(4)]).filter(
    lambda m: 0.1 <= abs(m[0] * m[3] - m[1] * m[2]) <= 10)


@given(mats)
def test_affine_covariance_on_parabola(m):
    amap = AffineMap([[m[0], m[1]], [m[2], m[3]]], (0.3, -1.0))
    c = F.parabola(5, 1, (0, 5))
    t = np.linspace(0, 5, 23)
    got = curvature_radius(apply_affine(c, amap), t)
    assert np.max(np.abs(got / affine_law(c, amap, t) - 1)) < 1e-8


@given(st.floats(0, 2 * math.pi), st.floats(-5, 5), st.floats(-5, 5), st.booleans())
def test_congruence_invariance(theta, bx, by, reflect):
    c, s = math.cos(theta), math.sin(theta)
    A = [[c, -s], [s, c]] if not reflect else [[c, s], [s, -c]]
    curve = F.ellipse(2, 1, (0, 3))
    t = np.linspace(0, 3, 17)
    got = np.abs(curvature_radius(apply_affine(curve, AffineMap(A, (bx, by))), t))
    assert np.allclose(got, np.abs(curvature_radius(curve, t)), rtol=1e-12)


# -- sampled curves -------------------------------------------------------------

def test_sampled_curve_derivatives():
    c = F.clothoid(1.0, (0.2, 1.5))
    t = c.grid(401)
    z = c(t)
    sc = SampledCurve(t, z.real, z.imag)
    tt = np.linspace(0.3, 1.4, 13)
    assert np.max(np.abs(curvature(sc, tt) - 2 * tt)) < 1e-6
    assert sc.stencil == 7


def test_sampled_curve_rejects_bad_t():
    with pytest.raises(ValueError):
        SampledCurve([0, 1, 1], [0, 1, 2], [0, 0, 0])


# -- winding screen ---------------------------------------------------------------

def test_winding_screen():
    assert winding_injectivity_check(F.parabola(1, 1, (-1, 1)))
    assert not winding_injectivity_check(F.circle())
    assert not winding_injectivity_check(F.clothoid(1.0, (0, 3.0)))
    assert winding_injectivity_check(F.line())
