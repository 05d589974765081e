import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from aesthetic_curves import families as F
from aesthetic_curves.core import arc_length_reparam, curvature_radius
from aesthetic_curves.errors import DomainViolation, InsufficientSamples, InvalidParams, ZeroEta
from aesthetic_curves.lac_msa import (LacParams, circle_reparam, fit_lac, generate_lac, lac_radius,
                                      msa_reparam, verify_msa)
from aesthetic_curves.lch_lcg import lcg_gradient

ALPHAS = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]


# -- radius law ---------------------------------------------------------------

def test_radius_examples():
    assert lac_radius(LacParams(1, 1, 2, 0, 5), 3.0) == pytest.approx(5.0)
    assert lac_radius(LacParams(0, 1, 0, 0, 1), math.log(2)) == pytest.approx(2.0)
    assert lac_radius(LacParams(-1, 2, 0, 0, 1), 0.25) == pytest.approx(2.0)


def test_domain_violation():
    p = LacParams(1, 1, 0, 0, 1)
    with pytest.raises(DomainViolation):
        lac_radius(p, -0.5)
    with pytest.raises(DomainViolation):
        LacParams(2, 1, 0, -1, 1)
    with pytest.raises(InvalidParams):
        LacParams(1, 0, 1)


# -- generator -------------------------------------------------------------------

@pytest.mark.parametrize("alpha", ALPHAS)
def test_generator_follows_law(alpha):
    p = LacParams(alpha, 1.0, 1.0, 0.0, 2.0)
    c = generate_lac(p, 10_000)
    u = np.linspace(0, 2, 41)
    assert np.max(np.abs(curvature_radius(c, u) - lac_radius(p, u))) < 1e-6


def test_generated_spiral_is_congruent_to_closed_form():
    _, xi, eta = F.log_spiral_lac_params(1, 1)
    s_all = 5.0
    c = generate_lac(LacParams(1.0, xi, eta, 0.0, s_all), 10_000)
    s = np.linspace(0, s_all, 60)
    t = np.log1p(s / math.sqrt(2))  # s = √2 (e^t - 1)
    ref = (np.exp((1 + 1j) * t) - 1) / ((1 + 1j) / math.sqrt(2))  # start at 0 heading along +x
    assert np.max(np.abs(c(s) - ref)) < 1e-6


def test_generated_clothoid_endpoint():
    c = generate_lac(LacParams(-1.0, 2.0, 0.0, 0.0, 1.0), 10_000)
    ref = complex(quad(lambda u: math.cos(u * u), 0, 1, epsabs=1e-13)[0],
                  quad(lambda u: math.sin(u * u), 0, 1, epsabs=1e-13)[0])
    assert abs(c(1.0) - ref) < 1e-7


def test_large_alpha_tends_to_circle():
    rho0, alpha, xi0 = 2.0, 1000.0, 1.0
    p = LacParams(alpha, rho0**alpha * xi0, rho0**alpha, 0.0, 0.5)
    c = generate_lac(p, 2000)
    u = np.linspace(0, 0.5, 21)
    rho = curvature_radius(c, u)
    # exactly rho0 (1 + xi0 s)^{1/alpha}; within 1e-3 of rho0 while s < 0.69
    assert np.allclose(rho, rho0 * (1 + xi0 * u) ** (1 / alpha), rtol=1e-9)
    assert np.max(np.abs(rho - rho0)) < 1e-3


@pytest.mark.parametrize("alpha", ALPHAS)
def test_generated_gradient_is_alpha(alpha):
    p = LacParams(alpha, 1.0, 1.0, 0.0, 2.0)
    alc = arc_length_reparam(generate_lac(p, 10_000))
    s = np.linspace(0.1, 1.9, 25)
    g = np.array([lcg_gradient(alc, v) for v in s])
    assert np.max(np.abs(g - alpha)) < 1e-5


# -- reparameterization ----------------------------------------------------------

def test_reparam_alpha_one():
    rep = msa_reparam(LacParams(1, 1, 1, 0, 5), beta=1.0)
    t = np.linspace(0, 1.5, 31)
    assert np.allclose(rep.s(t), np.expm1(t), rtol=1e-15)
    for eps in (0.1, 0.7):
        assert np.allclose(rep.shift(t, eps), math.exp(eps) * rep.s(t), rtol=1e-13, atol=1e-15)
    assert rep.mu == pytest.approx(math.e) and rep.nu == pytest.approx(math.e)


def test_reparam_alpha_zero_shift_is_identity():
    p = LacParams(0, 2.0, 0.5, 0, 3)
    rep = msa_reparam(p, beta=1.5)
    t = np.linspace(0, 2, 17)
    assert np.allclose(rep.shift(t, 0.4), rep.s(t), atol=1e-15)
    # rho(t + eps) = nu^eps rho(t)
    rho = lambda tt: lac_radius(p, rep.lac_s(tt))
    assert np.allclose(rho(t + 0.4), rep.nu**0.4 * rho(t), rtol=1e-13)
    assert rep.mu == 1.0


def test_circle_reparam_constants():
    rep = circle_reparam(1.0, 1.0)
    assert rep.mu == pytest.approx(math.e) and rep.nu == 1.0


def test_zero_eta():
    with pytest.raises(ZeroEta):
        msa_reparam(LacParams(-1, 2, 0, 0, 1))
    # moving the base point off the zero makes it well defined
    assert msa_reparam(LacParams(-1, 2, 0, 0, 1), base_s=0.5).mu == pytest.approx(math.e)


@given(st.sampled_from([a for a in ALPHAS if a]), st.floats(0.2, 3.0), st.floats(0.1, 3.0),
       st.floats(-2, 2).filter(lambda b: abs(b) > 0.05), st.floats(0.01, 1.0))
def test_reparam_exactness(alpha, xi, eta, beta, eps):
    p = LacParams(alpha, xi, eta, 0, 4)
    rep = msa_reparam(p, beta)
    t = np.linspace(0, 0.5, 11)
    lhs, rhs = rep.shift(t, eps), rep.mu**eps * rep.s(t)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-14 * np.max(np.abs(rhs)))
    assert math.log(rep.nu) == pytest.approx(math.log(rep.mu) / alpha, rel=1e-12)


# -- fit ---------------------------------------------------------------------------

def test_fit_power_law():
    s = np.linspace(0, 2, 64)
    fit = fit_lac(s, np.sqrt(2 * s + 3))
    assert fit.kind == "lac"
    assert fit.params.alpha == pytest.approx(2.0, abs=1e-6)
    assert fit.params.xi == pytest.approx(2.0, rel=1e-6)
    assert fit.params.eta == pytest.approx(3.0, rel=1e-6)


def test_fit_constant():
    fit = fit_lac(np.linspace(0, 1, 20), np.full(20, 5.0))
    assert fit.kind == "circle" and fit.residual < 1e-12 and fit.radius == 5.0


def test_fit_exponential():
    s = np.linspace(0, 1, 40)
    fit = fit_lac(s, np.exp(0.7 * s - 0.2))
    assert fit.kind == "lac" and fit.params.alpha == 0.0
    assert fit.params.xi == pytest.approx(0.7)


def test_fit_line():
    fit = fit_lac(np.linspace(0, 1, 20), np.full(20, np.inf))
    assert fit.kind == "line"


def test_fit_ellipse_fails():
    alc = arc_length_reparam(F.ellipse(2, 1, (0.1, 1.4)))
    s = alc.grid(64)
    fit = fit_lac(s - s[0], np.abs(alc.radius(s)))
    assert fit.kind is None and fit.residual > 1e-3


def test_fit_needs_samples():
    with pytest.raises(InsufficientSamples):
        fit_lac([0, 1, 2], [1, 2, 3])


# -- verify_msa ---------------------------------------------------------------------

@pytest.mark.parametrize("alpha", ALPHAS)
def test_lacs_hold(alpha):
    p = LacParams(alpha, 1.0, 1.0, 0.0, 2.0)
    rep = verify_msa(arc_length_reparam(generate_lac(p, 10_000)))
    assert rep.holds and rep.residual < 1e-6
    assert rep.alpha == pytest.approx(alpha, abs=1e-6)
    if alpha:
        assert math.log(rep.nu) == pytest.approx(math.log(rep.mu) / rep.alpha, abs=1e-8)


def test_spiral_constants():
    rep = verify_msa(arc_length_reparam(F.log_spiral(1, 1, (0, 2))), beta=1.0)
    assert rep.holds
    assert rep.mu == pytest.approx(math.e) and rep.nu == pytest.approx(math.e, rel=1e-6)


def test_circle_and_line_hold():
    rep = verify_msa(arc_length_reparam(F.circle(2.0, domain=(0, 3))))
    assert rep.holds and rep.fitted == "circle" and rep.nu == 1.0
    rep = verify_msa(arc_length_reparam(F.line(0, 1 + 1j)))
    assert rep.holds and rep.fitted == "line" and rep.constants == "arbitrary"


@pytest.mark.parametrize("curve", [
    F.ellipse(2, 1, (0.1, 1.4)), F.hyperbola(1, 2, (-1, 1)), F.sine(1, 1, (0.3, 2.8)),
    F.cubic_bezier(0, 1 + 2j, 3 - 1j, 4 + 1j)])
def test_negative_corpus(curve):
    rep = verify_msa(arc_length_reparam(curve))
    assert not rep.holds and rep.fit_residual > 1e-3


def test_bad_eps():
    with pytest.raises(ValueError):
        verify_msa(arc_length_reparam(F.circle()), eps_list=())
