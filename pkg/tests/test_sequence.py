from fractions import Fraction

import mpmath
import pytest

from balancing_cert.realnum import PrecisionError
from balancing_cert.sequence import (
    BalancingTable,
    balancing,
    binet_interval,
    binet_residual,
    growth_bounds_hold,
)


@pytest.mark.parametrize("n,value", [(0, 0), (1, 1), (2, 6), (3, 35)])
def test_small_values(n, value):
    assert balancing(n) == value


def test_b100_two_word_sizes():
    # recurrence run modulo two unrelated word sizes, then compared with the
    # exact value; a 64-bit and a 61-bit Mersenne modulus
    for mod in (1 << 64, (1 << 61) - 1):
        a, b = 0, 1
        for _ in range(99):
            a, b = b, (6 * b - a) % mod
        assert balancing(100) % mod == b
    # and the nearest integer to Binet at high precision
    with mpmath.workdps(120):
        al = 3 + mpmath.sqrt(8)
        binet = (al ** 100 - (3 - mpmath.sqrt(8)) ** 100) / (4 * mpmath.sqrt(2))
        assert int(mpmath.nint(binet)) == balancing(100)


def test_table_and_doubling_agree_past_the_cap():
    small = BalancingTable(cap=10)
    for n in (11, 50, 257, 1000):
        assert small[n] == balancing(n)
    with pytest.raises(IndexError):
        small[-1]


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        balancing(-1)


def test_cassini_identity():
    for n in range(1, 501):
        assert balancing(n) ** 2 - balancing(n + 1) * balancing(n - 1) == 1


def test_strictly_increasing():
    vals = [balancing(n) for n in range(1, 300)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("n,p,bound_exp", [(1, 128, 64), (3, 256, 128), (50, 512, 256)])
def test_binet_residual_examples(n, p, bound_exp):
    assert binet_residual(n, p) < Fraction(1, 1 << bound_exp)


def test_binet_residual_contract_range():
    for n in range(1, 201):
        assert binet_residual(n, 4 * n + 64) < Fraction(1, 1 << (2 * n))


def test_binet_interval_encloses_value():
    for n in (1, 7, 60):
        assert balancing(n) in binet_interval(n, 4 * n + 64)


def test_binet_residual_rejects_low_precision():
    with pytest.raises(ValueError):
        binet_residual(5, 32)
    with pytest.raises(ValueError):
        binet_residual(0, 128)


def test_growth_examples():
    assert growth_bounds_hold(2)
    assert growth_bounds_hold(3)
    assert growth_bounds_hold(100)


def test_growth_range():
    assert all(growth_bounds_hold(n) for n in range(2, 501))


def test_growth_precondition():
    with pytest.raises(ValueError):
        growth_bounds_hold(1)


def test_precision_error_is_arithmetic_error():
    assert issubclass(PrecisionError, ArithmeticError)
