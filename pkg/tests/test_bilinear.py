import math

import pytest
from hypothesis import given, settings, strategies as st

from conftest import rel_err
from genbilinear import bilinear as bl
from genbilinear.errors import DomainError
from genbilinear.gammakit import EULER_GAMMA


def val(res):
    return complex(res.value)


def test_frozen_macdonald(oracle):
    for al, a, b, want in oracle["bilinear"]["macdonald"]:
        assert rel_err(val(bl.macdonald_bilinear(al, a, b)), want) < 1e-11, (al, a, b)


def test_frozen_s(oracle):
    for al, b1, b2, want in oracle["bilinear"]["S"]:
        assert rel_err(val(bl.gegenbauer_s_bilinear(al, b1, b2)), want) < 1e-11, (al, b1, b2)


def test_frozen_z(oracle):
    for al, l1, l2, want in oracle["bilinear"]["Z"]:
        assert rel_err(val(bl.gegenbauer_z_bilinear(al, l1, l2)), want) < 1e-11, (al, l1, l2)


def test_macdonald_examples():
    assert abs(val(bl.macdonald_bilinear(0.5, 1, 1)) - math.pi / 2) < 1e-14
    assert abs(val(bl.macdonald_bilinear(0, 2, 2)) - 0.25) < 1e-15
    spot = bl.macdonald_bilinear(1, 1, 1)
    assert abs(val(spot) - (math.log(4) - 1 - 2 * EULER_GAMMA)) < 1e-9
    assert abs(val(spot) + 0.7681369) < 1e-7
    assert spot.anomalous and spot.variable_convention == "u=r²" and spot.method == "closed_form"
    assert not bl.macdonald_bilinear(0.5, 1, 2).anomalous
    want = math.pi * (0.5 ** 0.5 - 2 ** 0.5) / (math.sin(math.pi / 2) * (1 - 4))
    assert abs(val(bl.macdonald_bilinear(0.5, 1, 2)) - want) < 1e-14


def test_macdonald_oracle_examples():
    assert rel_err(val(bl.macdonald_bilinear_oracle(1, 1, 2)), val(bl.macdonald_bilinear(1, 1, 2))) < 1e-7
    assert rel_err(val(bl.macdonald_bilinear_oracle(2, 1.3, 0.7)), val(bl.macdonald_bilinear(2, 1.3, 0.7))) < 1e-7
    assert rel_err(val(bl.macdonald_bilinear_oracle(0.9, 1, 1)), val(bl.macdonald_bilinear(0.9, 1, 1))) < 1e-9
    res = bl.macdonald_bilinear_oracle(0.5, 1, 2)
    assert res.method == "oracle" and not res.anomalous


def test_macdonald_preconditions():
    with pytest.raises(DomainError):
        bl.macdonald_bilinear(0.5, -1, 0.5)


def test_macdonald_expansion_structure():
    ex = bl.macdonald_expansion(2, 1.3, 0.7)
    ks = sorted(k.real for k, _ in ex.terms)
    assert ks == [-2.0, -1.0]
    assert ex.anomalous
    # leading coefficient of K_2(a x) K_2(b x) ~ 4/(a^2 b^2 u^2)
    assert rel_err(ex.coefficient(-2), 4 / (1.3 * 0.7) ** 2) < 1e-14
    assert rel_err(ex.coefficient(-1), -(1 / 1.3 ** 2 + 1 / 0.7 ** 2)) < 1e-14
    assert ex.provenance
    assert not bl.macdonald_expansion(0.5, 1, 2).anomalous


def test_s_examples():
    assert rel_err(val(bl.gegenbauer_s_bilinear_oracle(1, 0.3, 0.9)), val(bl.gegenbauer_s_bilinear(1, 0.3, 0.9))) < 1e-7
    assert rel_err(val(bl.gegenbauer_s_bilinear_oracle(0.6, 1, 1)), val(bl.gegenbauer_s_bilinear(0.6, 1, 1))) < 1e-7
    assert rel_err(val(bl.gegenbauer_s_bilinear_oracle(2, 0, 0)), val(bl.gegenbauer_s_bilinear(2, 0, 0))) < 1e-6
    assert rel_err(val(bl.gegenbauer_s_bilinear_oracle(0.4, 0.5, 1.5)),
                   val(bl.gegenbauer_s_bilinear(0.4, 0.5, 1.5))) < 1e-7
    res = bl.gegenbauer_s_bilinear(1, 0.3, 0.9)
    assert res.anomalous and res.variable_convention == "u=2(w+1)"
    with pytest.raises(DomainError):
        bl.gegenbauer_s_bilinear(-1.2, 0.3, 0.9)


def test_s_alpha_zero_sign():
    # the alpha = 0 off-diagonal identity, checked against the definition
    assert rel_err(val(bl.gegenbauer_s_bilinear(0, 1, 2)), val(bl.gegenbauer_s_bilinear_oracle(0, 1, 2))) < 1e-9


def test_z_examples():
    assert abs(val(bl.gegenbauer_z_bilinear(0, 0.5, 0.5)) - 4 * math.pi / 3) < 1e-9
    assert abs(4 * math.pi / 3 - 4.1887902) < 1e-7
    assert abs(val(bl.gegenbauer_z_bilinear(-1, 1, 1.5)) - val(bl.gegenbauer_z_bilinear(1, 1, 1.5))) < 1e-12
    for al, l1, l2, tol in ((1, 1.0, 1.5, 1e-7), (2, 0.9, 0.9, 1e-6), (-0.3, 2, 3, 1e-7), (0.5, 0.8, 1.4, 1e-7)):
        assert rel_err(val(bl.gegenbauer_z_bilinear_oracle(al, l1, l2)),
                       val(bl.gegenbauer_z_bilinear(al, l1, l2))) < tol
    res = bl.gegenbauer_z_bilinear(1, 1, 1.5)
    assert res.anomalous and res.variable_convention == "u=2(w−1)"
    with pytest.raises(DomainError):
        bl.gegenbauer_z_bilinear(0.5, -0.2, 1)


def _richardson_limit(fn, x0, h=1e-4):
    # symmetric-in-h model: f(x0+h) = L + c1 h + c2 h^2
    f1, f2 = fn(x0 + h), fn(x0 + h / 2)
    return 2 * f2 - f1


@pytest.mark.parametrize("al", [0.3, 0, 1, 2])
def test_macdonald_diagonal_limit(al):
    a = 1.2
    lim = _richardson_limit(lambda b: val(bl.macdonald_bilinear(al, a, b)), a)
    assert rel_err(lim, val(bl.macdonald_bilinear(al, a, a))) < 1e-6


@pytest.mark.parametrize("al", [0.4, 0, 1, 2])
def test_s_diagonal_limit(al):
    beta = 0.9
    lim = _richardson_limit(lambda b2: val(bl.gegenbauer_s_bilinear(al, beta, b2)), beta)
    assert rel_err(lim, val(bl.gegenbauer_s_bilinear(al, beta, beta))) < 1e-6


@pytest.mark.parametrize("al", [0.5, 0, 1, 2])
def test_z_diagonal_limit(al):
    lam = 1.1
    lim = _richardson_limit(lambda l2: val(bl.gegenbauer_z_bilinear(al, lam, l2)), lam)
    assert rel_err(lim, val(bl.gegenbauer_z_bilinear(al, lam, lam))) < 1e-6


@pytest.mark.parametrize("gap", [1e-7, 1e-5, 5e-4, 2e-3])
def test_limit_band_is_smooth(gap):
    # inside the coincidence band and the contour band values stay on the curve
    for fn, x in ((bl.macdonald_bilinear, 1.0), (bl.gegenbauer_s_bilinear, 0.8), (bl.gegenbauer_z_bilinear, 1.3)):
        for al in (0.4, 1):
            v0, v1 = val(fn(al, x, x)), val(fn(al, x, x + gap))
            assert abs(v1 - v0) <= 50 * gap * max(1, abs(v0))


def test_symmetry():
    for al in (0.3, 1, 2, 3):
        assert rel_err(val(bl.macdonald_bilinear(al, 0.7, 1.9)), val(bl.macdonald_bilinear(al, 1.9, 0.7))) < 1e-9
    for al in (0.4, 1, 2, 3):
        assert rel_err(val(bl.gegenbauer_s_bilinear(al, 0.3, 1.7)), val(bl.gegenbauer_s_bilinear(al, 1.7, 0.3))) < 1e-9
        assert rel_err(val(bl.gegenbauer_z_bilinear(al, 0.6, 2.4)), val(bl.gegenbauer_z_bilinear(al, 2.4, 0.6))) < 1e-9


def test_z_sign_flip():
    for al in (0.3, 0.7, 1, 2, 3):
        for l1, l2 in ((0.8, 1.4), (1.2, 1.2)):
            assert abs(val(bl.gegenbauer_z_bilinear(al, l1, l2)) - val(bl.gegenbauer_z_bilinear(-al, l1, l2))) < 1e-10


@pytest.mark.parametrize("al", [1, 2])
@pytest.mark.parametrize("c", [0.5, 3.0])
def test_anomaly_scaling_shift(al, c):
    base = val(bl.gegenbauer_s_bilinear_oracle(al, 0.3, 0.9))
    scaled = val(bl.gegenbauer_s_bilinear_oracle(al, 0.3, 0.9, scale=c))
    f_m1 = bl.gegenbauer_s_expansion(al, 0.3, 0.9).log_coefficient
    assert abs(f_m1) > 1e-3
    assert abs(scaled - base + f_m1 * math.log(c)) < 1e-9 * max(1, abs(base))


def test_no_shift_when_not_anomalous():
    base = val(bl.gegenbauer_s_bilinear_oracle(0.4, 0.3, 0.9))
    assert abs(val(bl.gegenbauer_s_bilinear_oracle(0.4, 0.3, 0.9, scale=3.0)) - base) < 1e-9


@pytest.mark.parametrize("m", [1, 2, 3])
def test_dimreg_reproduces_prop(m):
    for a, b in ((1, 2), (1.3, 0.7), (1, 1)):
        value, ld = bl.macdonald_dimreg(m, a, b)
        assert rel_err(value, val(bl.macdonald_bilinear(m, a, b))) < 1e-6


def test_resiu_family_matches_generic():
    for al in (0.3, -0.6, 1.4):
        want = (1 * 2 / 4) ** -al * val(bl.macdonald_bilinear(al, 1, 2))
        assert rel_err(bl.resiu_family(al, 1, 2), want) < 1e-12


def test_green_identity():
    assert bl.green_identity_check("macdonald", {"alpha": 0.5, "a": 1, "b": 2}) <= 1e-8
    assert bl.green_identity_check("gegenbauer_s", {"alpha": 0.3, "beta1": 1, "beta2": 2}) <= 1e-8
    assert bl.green_identity_check("gegenbauer_z", {"alpha": 0.3, "lam1": 0.8, "lam2": 1.4}) <= 1e-8
    assert bl.green_identity_check("macdonald", {"alpha": -0.7, "a": 0.5, "b": 1.3}) <= 1e-8
    with pytest.raises(DomainError):
        bl.green_identity_check("macdonald", {"alpha": 0.5, "a": 1, "b": 1})
    with pytest.raises(DomainError):
        bl.green_identity_check("macdonald", {"alpha": 1.5, "a": 1, "b": 2})


def test_asymptotics_report():
    rep = bl.bilinear_asymptotics_check("S_case", 1, [20, 40, 80])
    assert rep.kind == "S_case" and rep.params == (20.0, 40.0, 80.0)
    assert all(e1 > e2 for e1, e2 in zip(rep.errors, rep.errors[1:]))
    assert rep.errors[-1] < 1e-3
    rep = bl.bilinear_asymptotics_check("Z_case", 0, [20, 40, 80])
    assert rep.errors[-1] < 1e-3 and -2.3 < rep.rate < -1.7
    rep = bl.bilinear_asymptotics_check("Z_case", 0.5, [20, 40, 80])
    assert max(rep.errors) < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=-0.95, max_value=0.95).filter(lambda x: abs(x) > 1e-3),
       st.floats(min_value=0.3, max_value=3), st.floats(min_value=0.3, max_value=3))
def test_macdonald_matches_oracle(al, a, b):
    closed = val(bl.macdonald_bilinear(al, a, b))
    oracle = val(bl.macdonald_bilinear_oracle(al, a, b))
    assert rel_err(oracle, closed) < 1e-8


@settings(max_examples=15, deadline=None)
@given(st.floats(min_value=-0.8, max_value=2.6), st.floats(min_value=0, max_value=2), st.floats(min_value=0, max_value=2))
def test_s_matches_oracle(al, b1, b2):
    closed = val(bl.gegenbauer_s_bilinear(al, b1, b2))
    oracle = val(bl.gegenbauer_s_bilinear_oracle(al, b1, b2))
    assert abs(oracle - closed) < 1e-6 * max(1, abs(closed))


@pytest.mark.parametrize("al", [1e-5, -1e-5, 1 - 1e-4, 1 + 1e-9, 2 + 1e-5, 0.97])
def test_oracles_near_integer_alpha(al):
    # the oracles switch to a Cauchy integral in alpha within 1e-3 of an integer
    pairs = ((bl.macdonald_bilinear, bl.macdonald_bilinear_oracle, (1.0, 2.0)),
             (bl.gegenbauer_s_bilinear, bl.gegenbauer_s_bilinear_oracle, (0.5, 1.5)),
             (bl.gegenbauer_z_bilinear, bl.gegenbauer_z_bilinear_oracle, (0.8, 1.4)))
    for closed, oracle, params in pairs:
        assert rel_err(val(oracle(al, *params)), val(closed(al, *params))) < 1e-10, (closed.__name__, al)


def test_s_oracle_rejects_alpha_near_minus_one():
    with pytest.raises(DomainError):
        bl.gegenbauer_s_bilinear_oracle(-1 + 1e-5, 0.5, 1.5)


@pytest.mark.parametrize("d", [1e-6, 1e-8, 1e-9, -3e-7])
def test_macdonald_closed_relative_accuracy_near_integer(d):
    # the non-integer closed form keeps full relative accuracy next to the pole at alpha = 1
    import mpmath as mp

    with mp.workdps(40):
        al = mp.mpf(1 + d)
        want = mp.pi * (mp.mpf(2) ** -al - mp.mpf(2) ** al) / (mp.sin(mp.pi * al) * (1 - 4))
        assert rel_err(val(bl.macdonald_bilinear(1 + d, 1.0, 2.0)), complex(want)) < 1e-14
