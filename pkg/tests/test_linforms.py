from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from balancing_cert.linforms import (
    ALPHA,
    FORMS,
    FOUR_SQRT2,
    PRINTED_STEP_BOUNDS,
    TWO,
    Div,
    MatveevInput,
    Pow,
    PolyLogBound,
    Rat,
    all_step_bounds,
    base_matveev_factor,
    form_value,
    guzman_unwrap,
    height_upper_bound,
    matveev_coefficient,
    mul,
    nonvanishing_check,
    one_plus,
    step_bound,
)
from balancing_cert.realnum import Interval

mpmath.mp.dps = 60
ALPHA_MP = 3 + mpmath.sqrt(8)


def upper(x) -> float:
    return float(x.upper)


def test_height_of_alpha():
    h = height_upper_bound(ALPHA).constant
    assert abs(upper(h) - float(mpmath.log(ALPHA_MP) / 2)) < 1e-15
    assert abs(upper(h) - 0.8814) < 1e-4


def test_height_of_rational():
    h = height_upper_bound(Rat(3, 2)).constant
    assert h.lower <= Fraction(str(mpmath.log(3))) + Fraction(1, 10 ** 40)
    assert abs(upper(h) - float(mpmath.log(3))) < 1e-15
    assert upper(height_upper_bound(Rat(1)).constant) == 0


@pytest.mark.parametrize("d", [1, 2, 5, 17, 60])
def test_height_bound_of_eta_dominates_true_height(d):
    # 4 sqrt 2 (2^d + 1) has minimal polynomial x^2 - 32 m^2: height log(32 m^2)/2
    lin = height_upper_bound(mul(FOUR_SQRT2, one_plus(Pow(TWO, "a1-a2"))))
    bound = lin.evaluate({"a1-a2": d})
    true = mpmath.log(32 * (2 ** d + 1) ** 2) / 2
    assert bound.upper >= Fraction(str(true))
    assert set(lin.terms) == {"a1-a2"}
    assert abs(upper(lin.terms["a1-a2"]) - float(mpmath.log(2))) < 1e-15


@pytest.mark.parametrize("m,d", [(1, 1), (3, 2), (10, 7)])
def test_height_bound_of_quotient(m, d):
    e = Div(one_plus(Pow(ALPHA, "n1-n2")), mul(FOUR_SQRT2, one_plus(Pow(TWO, "a1-a2"))))
    b = height_upper_bound(e).evaluate({"n1-n2": m, "a1-a2": d})
    expected = (mpmath.log(ALPHA_MP) / 2 * m + mpmath.log(2)
                + mpmath.log(32) / 2 + (d + 1) * mpmath.log(2))
    assert abs(float(b.upper) - float(expected)) < 1e-12


def test_product_height_is_sum():
    a = height_upper_bound(ALPHA).constant
    b = height_upper_bound(FOUR_SQRT2).constant
    ab = height_upper_bound(mul(ALPHA, FOUR_SQRT2)).constant
    assert ab.upper <= a.upper + b.upper + Fraction(1, 2 ** 200)


def test_height_rejects_unknown_node():
    with pytest.raises(ValueError):
        height_upper_bound("alpha")


def test_matveev_step1_constant():
    c = step_bound(1, {}).upper
    assert Fraction("8.1e12") <= c <= Fraction("8.22e12")
    assert abs(float(base_matveev_factor().upper) - 2.3697e12) < 1e8


def test_matveev_formula_two_terms_degree_one():
    one = Interval.exact(1, 128)
    c = matveev_coefficient(MatveevInput(2, 1, (one, one)), 128)
    expected = mpmath.mpf("1.4") * 30 ** 5 * mpmath.mpf(2) ** mpmath.mpf("4.5")
    assert c.exponent == 1
    assert c.coefficient.lower <= Fraction(str(expected)) * (1 + Fraction(1, 10 ** 30))
    assert abs(float(c.coefficient.upper) / float(expected) - 1) < 1e-14


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=Fraction(17, 100), max_value=100),
       st.fractions(min_value=0, max_value=10))
def test_matveev_monotone_in_A(a, extra):
    one = Interval.exact(1, 128)
    lo = matveev_coefficient(MatveevInput(3, 2, (one, one, Interval.from_fraction(a, 128))), 128)
    hi = matveev_coefficient(MatveevInput(3, 2, (one, one, Interval.from_fraction(a + extra, 128))), 128)
    assert lo.upper <= hi.upper


def test_matveev_rejects_small_A():
    tiny = Interval.from_fraction(Fraction(1, 10), 64)
    one = Interval.exact(1, 64)
    with pytest.raises(ValueError, match="0.16"):
        MatveevInput(2, 1, (tiny, one))
    with pytest.raises(ValueError):
        MatveevInput(1, 1, (one,))


def test_step_bounds_close_to_printed_and_never_above():
    bounds = all_step_bounds()
    for s, (printed, k) in PRINTED_STEP_BOUNDS.items():
        assert bounds[s].exponent == k
        assert Fraction(9, 10) * printed <= bounds[s].upper <= printed, s


def test_step_needs_its_priors():
    with pytest.raises(KeyError, match="missing prior"):
        step_bound(2, {})
    with pytest.raises(KeyError):
        step_bound(8, {})


def test_polylog_rescale():
    b = PolyLogBound(Interval.exact(10, 64), 1)
    r = b.rescaled(3)
    assert r.exponent == 3
    L0 = 1 + mpmath.log(100)
    assert abs(float(r.upper) - float(10 / L0 ** 2)) < 1e-12
    with pytest.raises(ValueError):
        r.rescaled(2)


def test_guzman_examples():
    g = guzman_unwrap(1, 100)
    assert abs(float(g.upper) - float(200 * mpmath.log(100))) < 1e-9
    big = guzman_unwrap(4, Fraction("4.73e50") / Fraction("1.7627471740390860"))
    assert Fraction("7.7e59") < big.upper < Fraction("7.9e59")
    with pytest.raises(ValueError):
        guzman_unwrap(4, 10)
    with pytest.raises(ValueError):
        guzman_unwrap(0, 10 ** 9)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(0, 200))
def test_guzman_unwrap_is_an_upper_bound(r, k):
    H = Fraction((4 * r * r) ** r + 1) * Fraction(2) ** k
    u = guzman_unwrap(r, H).upper
    L = mpmath.mpf(u.numerator) / u.denominator
    assert u > H
    # every L' >= L has L'/(log L')^r >= H; checking at L suffices as the map increases past e^r
    assert L / mpmath.log(L) ** r >= mpmath.mpf(H.numerator) / H.denominator


@pytest.mark.parametrize("form", FORMS)
@pytest.mark.parametrize("witness", [(3, 3, 6, 2, 1), (150, 20, 300, 250, 100), (101, 100, 257, 9, 3)])
def test_forms_nonvanishing(form, witness):
    assert nonvanishing_check(form, witness)


def test_form_value_small_and_rejects_unknown():
    v = form_value("Gamma", (3, 3, 6, 2, 1), 128)
    ref = ALPHA_MP ** 3 / (64 * 4 * mpmath.sqrt(2)) - 1
    assert abs(float(v.lower) - float(ref)) < 1e-15 and v.width < Fraction(1, 2 ** 100)
    with pytest.raises(KeyError):
        form_value("Delta", (1, 1, 1, 1, 1), 64)
