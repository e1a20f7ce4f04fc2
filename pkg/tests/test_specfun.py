"""Special function tests against independent closed forms and quadrature."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import erfcx

from ggbm import DomainError, gamma, green_constant, m_wright, \
    m_wright_moment, mittag_leffler, time_kernel_constant
from ggbm.exceptions import PoleError
from ggbm.specfun import m_wright_cutoff, m_wright_quad_rule
from ggbm.verify import moment_quadrature


def test_gamma_matches_math():
    for x in (0.5, 1.0, 2.5, 7.0, -0.5):
        assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-15)


def test_gamma_pole():
    with pytest.raises(PoleError):
        gamma(0.0)
    with pytest.raises(PoleError):
        gamma(-3.0)


def test_mittag_leffler_beta_one_is_exp():
    for z in (-30.0, -5.0, -1.0, -0.1, 0.0):
        r = mittag_leffler(1.0, z)
        assert r.value == pytest.approx(math.exp(z), rel=1e-12)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 3.0, 10.0, 100.0])
def test_mittag_leffler_half_closed_form(x):
    # E_{1/2}(-x) = exp(x^2) erfc(x), via erfcx to avoid overflow
    expected = float(erfcx(x))
    r = mittag_leffler(0.5, -x)
    assert r.value == pytest.approx(expected, rel=1e-9)


def test_mittag_leffler_at_zero_is_one():
    for beta in (0.3, 0.5, 0.7, 0.9, 1.0):
        assert mittag_leffler(beta, 0.0).value == 1.0


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.7, 0.9])
def test_mittag_leffler_monotone_and_bounded(beta):
    zs = np.linspace(-80.0, 0.0, 161)
    vals = np.array([mittag_leffler(beta, z).value for z in zs])
    assert np.all(np.diff(vals) > 0.0)
    assert np.all(vals > 0.0)
    assert np.all(vals <= 1.0)


def test_mittag_leffler_domain_errors():
    with pytest.raises(DomainError):
        mittag_leffler(0.0, -1.0)
    with pytest.raises(DomainError):
        mittag_leffler(1.2, -1.0)
    with pytest.raises(DomainError):
        mittag_leffler(0.5, 1.0)


@pytest.mark.parametrize("tau", [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
def test_m_wright_half_is_gaussian(tau):
    expected = math.exp(-tau * tau / 4.0) / math.sqrt(math.pi)
    assert m_wright(0.5, tau).value == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("beta", [0.25, 0.5, 0.75, 0.9])
def test_m_wright_normalization(beta):
    cutoff = m_wright_cutoff(beta)
    total, err = quad(lambda t: m_wright(beta, t).value, 0.0, cutoff,
                      epsabs=1e-12, epsrel=1e-10, limit=200)
    assert total == pytest.approx(1.0, abs=1e-7)


def test_m_wright_nonnegative():
    for beta in (0.3, 0.6, 0.85):
        taus = np.linspace(0.0, m_wright_cutoff(beta), 64)
        for tau in taus:
            assert m_wright(beta, tau).value >= 0.0


def test_m_wright_moment_closed_form():
    for beta in (0.3, 0.5, 0.8):
        for delta in (0.5, 1.0, 2.0, 3.0):
            expected = math.gamma(delta + 1.0) / math.gamma(beta * delta + 1.0)
            assert m_wright_moment(beta, delta) == pytest.approx(
                expected, rel=1e-15)
    assert m_wright_moment(0.5, 1.0) == pytest.approx(
        1.0 / math.gamma(1.5), rel=1e-15)


def test_m_wright_moment_vs_quadrature():
    for beta in (0.4, 0.7):
        for delta in (-0.6, -0.5, 1.5):
            mom = m_wright_moment(beta, delta)
            assert moment_quadrature(beta, delta) == pytest.approx(
                mom, rel=1e-6)


def test_m_wright_moment_divergent_order():
    with pytest.raises(DomainError):
        m_wright_moment(0.5, -1.0)
    with pytest.raises(DomainError):
        m_wright_moment(0.5, -1.5)


def test_m_wright_quad_rule_integrates_density():
    for beta in (0.3, 0.5, 0.7):
        nodes, weights, mvals = m_wright_quad_rule(beta)
        assert float(np.dot(weights, mvals)) == pytest.approx(1.0, abs=1e-8)


def test_time_kernel_constant_values():
    # (1/alpha) 2^{-1/alpha} pi^{-d/2} Gamma(d/2 - 1/alpha)
    for alpha, d in ((1.5, 3), (2.0, 2), (1.2, 2), (1.0, 3)):
        expected = (2.0 ** (-1.0 / alpha) / alpha * math.pi ** (-0.5 * d)
                    * math.gamma(0.5 * d - 1.0 / alpha))
        assert time_kernel_constant(alpha, d) == pytest.approx(
            expected, rel=1e-15)


def test_time_kernel_constant_requires_decay():
    with pytest.raises(DomainError):
        time_kernel_constant(1.5, 1)


def test_green_constant_brownian_case():
    assert green_constant(1.0, 1.0, 3) == pytest.approx(
        1.0 / (2.0 * math.pi), abs=1e-12)


def test_green_constant_reference_value():
    # beta=0.5, alpha=1.5, d=2: C(3/2,2) * Gamma(1/3)/Gamma(2/3)
    c = time_kernel_constant(1.5, 2)
    expected = c * math.gamma(1.0 - 1.0 / 1.5) / math.gamma(1.0 - 0.5 / 1.5)
    assert green_constant(0.5, 1.5, 2) == pytest.approx(expected, rel=1e-14)
    assert green_constant(0.5, 1.5, 2) == pytest.approx(0.7085, abs=5e-5)


def test_green_constant_domain_errors():
    with pytest.raises(DomainError):
        green_constant(0.5, 1.5, 1)   # d*alpha <= 2
    with pytest.raises(DomainError):
        green_constant(0.5, 0.9, 3)   # alpha <= 1 with beta < 1
