import cmath
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from genbilinear import genint as gi
from genbilinear.gammakit import gamma
from genbilinear.errors import ConvergenceError, DomainError, InvalidExpansionError

EG = 0.5772156649015329
SE, GI = gi.SingularExpansion, gi.GenIntegrand


def unit_power(k, coeff=1.0):
    """coeff * r**k on ]0, 1]."""
    return GI(f=lambda r: coeff * r ** k if r <= 1 else 0.0, expansion=SE(((k, coeff),)),
              support=1.0, remainder=lambda r: 0.0)


def exp_over_r():
    return GI(f=lambda r: math.exp(-r) / r, expansion=SE(((-1, 1),)),
              remainder=lambda r: math.expm1(-r) / r)


def test_monomial_examples():
    assert abs(gi.gen_integrate(unit_power(-1))) < 1e-14
    assert abs(gi.gen_integrate(unit_power(-2)) + 1) < 1e-14
    assert abs(gi.gen_integrate(unit_power(-1.5)) + 2) < 1e-14


def test_gamma_integral_at_zero():
    assert abs(gi.gen_integrate(exp_over_r()) + EG) < 1e-11


def test_beta_example_u0_v2():
    g = GI(f=lambda r: (1 - r) / r if r <= 1 else 0.0, expansion=SE(((-1, 1),)), support=1.0)
    assert abs(gi.gen_integrate(g) + 1) < 1e-12


def test_without_remainder_callback():
    # plain subtraction path
    g = GI(f=lambda r: math.exp(-r) / r, expansion=SE(((-1, 1),)))
    assert abs(gi.gen_integrate(g) + EG) < 1e-10


def test_missing_singular_term_is_rejected():
    g = GI(f=lambda r: math.exp(-r) / r ** 2, expansion=SE(((-2, 1),)))
    with pytest.raises(InvalidExpansionError):
        gi.gen_integrate(g)


def test_expansion_properties():
    ex = SE(((-1, 2.0), (-2.5, 1.0)))
    assert ex.anomalous and ex.log_coefficient == 2
    assert not SE(((-2, 1.0),)).anomalous
    assert ex.coefficient(-2.5) == 1
    with pytest.raises(ValueError):
        SE(((-1, 1.0), (-1, 2.0)))
    with pytest.raises(DomainError):
        GI(f=abs, split=0.0)


@pytest.mark.parametrize("g, want", [
    (unit_power(-1), 0.0),
    (unit_power(-2), -1.0),
    (unit_power(-1.5), -2.0),
    (exp_over_r(), -EG),
])
def test_delta_limit_agrees(g, want):
    assert abs(gi.gen_integrate_delta_limit(g) - want) < 1e-9


def test_delta_limit_rejects_increasing_sequence():
    with pytest.raises(ValueError):
        gi.gen_integrate_delta_limit(unit_power(-2), [0.1, 0.2])


def test_scaling_examples():
    g2, shift = gi.scale_integrand(unit_power(-1), 2.0)
    assert abs(shift + math.log(2)) < 1e-15
    assert abs(gi.gen_integrate(g2) + math.log(2)) < 1e-12
    g2, shift = gi.scale_integrand(unit_power(-2), 2.0)
    assert shift == 0
    assert abs(gi.gen_integrate(g2) + 1) < 1e-12
    smooth = GI(f=lambda r: math.exp(-r))
    g2, shift = gi.scale_integrand(smooth, 3.0)
    assert shift == 0 and abs(gi.gen_integrate(g2) - 1) < 1e-11
    with pytest.raises(DomainError):
        gi.scale_integrand(smooth, -1.0)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 2.0, 7.0])
@pytest.mark.parametrize("k", [-1, -2, -1.5, -3])
def test_scaling_law_monomials(alpha, k):
    g = unit_power(k, 1.7)
    g2, shift = gi.scale_integrand(g, alpha)
    measured = gi.gen_integrate(g2) - gi.gen_integrate(g)
    assert abs(measured - shift) < 1e-12
    expect = -1.7 * math.log(alpha) if k == -1 else 0.0
    assert abs(shift - expect) < 1e-15


def test_change_of_variables_examples():
    ex = SE(((-1, 1.0),))
    assert abs(gi.change_of_variables_correction(ex, 3.0) + math.log(3)) < 1e-15
    ex2 = SE(((-2, 1.0),))
    d = gi.ratio_derivatives_from_taylor([0, 1, 1], 2)
    assert abs(d[2] + 1) < 1e-15
    corr = gi.change_of_variables_correction(ex2, 1.0, d)
    assert abs(corr + 1) < 1e-15
    with pytest.raises(KeyError):
        gi.change_of_variables_correction(ex2, 1.0)


def test_change_of_variables_numerically():
    # f = r^-2 on ]0, 2]; r = u + u^2 maps ]0, 1] onto it
    f = unit_power(-2)
    f = replace(f, f=lambda r: r ** -2 if r <= 2 else 0.0, support=2.0)
    before = gi.gen_integrate(f)
    h = GI(f=lambda u: (1 + 2 * u) / (u + u * u) ** 2 if u <= 1 else 0.0,
           expansion=SE(((-2, 1.0),)), support=1.0,
           remainder=lambda u: -1.0 / (1 + u) ** 2)
    after = gi.gen_integrate(h)
    corr = gi.change_of_variables_correction(f.expansion, 1.0, gi.ratio_derivatives_from_taylor([0, 1, 1], 2))
    assert abs(before + 0.5) < 1e-13
    assert abs(after - (before + corr)) < 1e-12


def test_power_map_needs_no_correction():
    # g(u) = u^a is not smooth at 0 with g'(0) != 0; the invariance is the power substitution
    g = exp_over_r()
    for a in (0.5, 2.0, 3.0):
        assert abs(gi.gen_integrate(gi.power_substitute(g, a)) + EG) < 1e-9


def test_power_substitute_examples():
    g = unit_power(-1)
    assert gi.power_substitute(g, 1.0) is g
    g2 = gi.power_substitute(g, 2.0)
    assert g2.expansion.coefficient(-1) == 2
    assert abs(gi.gen_integrate(g2)) < 1e-13


@pytest.mark.parametrize("alpha", [1 / 3, 0.5, 2.0, 3.0])
def test_power_substitution_examples(alpha):
    for name, params in (("gamma_example", {"alpha": -1}), ("beta_interval", {"u": -0.5, "v": 2.5}),
                         ("beta_interval", {"u": 0, "v": 2})):
        g = gi.example_integrand(name, **params)
        want = gi.example_value(name, **params)
        assert abs(gi.gen_integrate(gi.power_substitute(g, alpha), 1e-11) - want) < 2e-9


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=-2.5, max_value=-1.0), st.floats(min_value=-3, max_value=3),
       st.floats(min_value=0.2, max_value=3), st.sampled_from([1 / 3, 0.5, 2.0, 3.0]))
def test_power_substitution_random_monomials(k, c, rate, alpha):
    # c r^k + e^{-rate r} on ]0, 1]: the monomial is singular, the exponential smooth
    g = GI(f=lambda r: c * r ** k + math.exp(-rate * r) if r <= 1 else 0.0,
           expansion=SE(((k, c),)), support=1.0, remainder=lambda r: math.exp(-rate * r))
    base = gi.gen_integrate(g, 1e-12)
    want = (c / (k + 1) if k != -1 else 0.0) + (1 - math.exp(-rate)) / rate
    assert abs(base - want) < 1e-11
    assert abs(gi.gen_integrate(gi.power_substitute(g, alpha), 1e-12) - base) < 2e-10


@pytest.mark.parametrize("split", [0.25, 0.5, 1.0, 2.0, 4.0])
def test_split_independence(split):
    g = gi.example_integrand("gamma_example", alpha=-1)
    want = gi.example_value("gamma_example", alpha=-1)
    assert abs(gi.gen_integrate(replace(g, split=split), 1e-11) - want) <= 2e-11


def test_examples_match_closed_forms():
    assert abs(gi.example_value("gamma_example", alpha=0) + EG) < 1e-15
    cases = [("gamma_example", {"alpha": a}) for a in (0, -1, -2, 0.5, -0.5, 1.5)]
    cases += [("beta_interval", {"u": u, "v": v}) for u in (0, -1, -2, 0.3) for v in (2, 2.5)]
    cases += [("beta_halfline", {"u": u, "v": -1.5}) for u in (0, -1, 0.5)]
    for name, params in cases:
        got = gi.gen_integrate(gi.example_integrand(name, **params), 1e-12)
        assert abs(got - gi.example_value(name, **params)) < 1e-10, (name, params)


def test_gamma_family_against_scipy():
    for a in (0.3, 1.7, 2.2, -0.4, -1.5):
        got = gi.gen_integrate(gi.example_integrand("gamma_example", alpha=a), 1e-12)
        assert abs(got - special.gamma(a)) < 1e-10 * max(1, abs(special.gamma(a)))


def test_cautionary_family():
    assert gi.example_value("cautionary", alpha=0) == 0
    for a in (0.1, 0.01, 1e-4, -0.2):
        assert abs(gi.gen_integrate(gi.example_integrand("cautionary", alpha=a)) - 1) < 1e-12
    assert gi.gen_integrate(gi.example_integrand("cautionary", alpha=0)) == 0


def test_unknown_example():
    with pytest.raises(ValueError):
        gi.example_integrand("nope")
    with pytest.raises(DomainError):
        gi.example_integrand("beta_interval", u=0.5, v=-1)


def test_fit_exact_model():
    ex, resid = gi.fit_singular_coefficients(lambda r: 3 * r ** -2 + r ** -1, [-2, -1])
    assert abs(ex.coefficient(-2) - 3) < 1e-8 and abs(ex.coefficient(-1) - 1) < 1e-8
    assert resid < 1e-10
    ex, _ = gi.fit_singular_coefficients(lambda r: math.cos(r), [-2, -1])
    assert all(abs(c) < 1e-8 for _, c in ex.terms)


def test_fit_bessel_product_log_coefficient():
    # K_1(sqrt u)^2 ~ 1/u plus integrable u^0 log u terms
    ex, _ = gi.fit_singular_coefficients(lambda u: special.kv(1, math.sqrt(u)) ** 2, [-1],
                                         window=(0.0, 1e-4), extra_powers=2)
    assert abs(ex.coefficient(-1) - 1) < 1e-5


def test_fit_ill_conditioned():
    with pytest.raises(ConvergenceError):
        gi.fit_singular_coefficients(lambda r: r ** -1, [-1, -1 + 1e-9], cond_max=1e6)


def test_dimreg_gamma_pole():
    from genbilinear.gammakit import gamma
    ld = gi.dimreg_extract(lambda a: gamma(a + 1), -1)
    assert abs(ld.residue - 1) < 1e-12 and abs(ld.finite_part + EG) < 1e-12
    assert ld.gen_integral() == ld.finite_part


def test_dimreg_simple_pole():
    ld = gi.dimreg_extract(lambda a: 1 / (a + 3), -3)
    assert abs(ld.residue - 1) < 1e-13 and abs(ld.finite_part) < 1e-13


@settings(max_examples=20, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=2, max_size=6),
       st.integers(min_value=1, max_value=4))
def test_dimreg_synthetic_laurent(coeffs, m):
    def F(a):
        x = a + m
        return sum(c * x ** (j - 1) for j, c in enumerate(coeffs))
    ld = gi.dimreg_extract(F, -m)
    assert abs(ld.residue - coeffs[0]) < 1e-10 * max(1, abs(coeffs[0]))
    assert abs(ld.finite_part - coeffs[1]) < 1e-10 * max(1, max(abs(c) for c in coeffs))


def test_dimreg_rejects_double_pole_and_nearby_singularity():
    with pytest.raises(ConvergenceError):
        gi.dimreg_extract(lambda a: 1 / (a + 1) ** 2, -1)
    with pytest.raises(ConvergenceError):
        gi.dimreg_extract(lambda a: 1 / (a + 1) + 1 / (a + 1.2), -1)


def test_laurent_orientation():
    ld = gi.LaurentData(1.0, 2.0).with_correction(0.5)
    assert ld.gen_integral("plus") == 1.5 and ld.gen_integral("minus") == 2.5
    with pytest.raises(ValueError):
        ld.gen_integral("sideways")


def test_contour_derivative():
    assert abs(gi.contour_derivative(cmath.exp, 0.3) - cmath.exp(0.3)) < 1e-13


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0.2, max_value=3), st.floats(min_value=-2, max_value=2),
       st.floats(min_value=0, max_value=3))
def test_regular_integrand_matches_quad(rate, shift, freq):
    f = lambda r: math.exp(-rate * r) * (1 + shift * math.cos(freq * r) / 3)
    want, _ = integrate.quad(f, 0, np.inf, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert abs(gi.gen_integrate(GI(f=f), 1e-11) - want) < 1e-10


@pytest.mark.parametrize("alpha", [-0.5 + 2j, 0.3 - 1.5j, -1.5 + 0.7j])
def test_oscillatory_exponents_gamma(alpha):
    # r^(alpha-1) e^-r has a non-real leading exponent; the generalized integral is still Gamma(alpha)
    got = gi.gen_integrate(gi.example_integrand("gamma_example", alpha=alpha))
    want = gamma(alpha)
    assert abs(got - want) <= 1e-10 * abs(want)
