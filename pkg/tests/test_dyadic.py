import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from randcantor.dyadic import (DyadicInterval, DyadicRational, exp_enclosure, isqrt_newton,
                               iv_sqrt)
from randcantor.errors import NegativeInput

dyadics = st.builds(DyadicRational, st.integers(-10**30, 10**30), st.integers(-200, 50))


def test_canonical_form():
    d = DyadicRational(12, 0)
    assert (d.mantissa, d.exponent) == (3, 2)
    assert DyadicRational(0, 9).exponent == 0
    assert DyadicRational(6, -3) == Fraction(3, 4)


def test_decimal_is_exact():
    assert DyadicRational(3, -2).decimal() == "0.75"
    assert DyadicRational(-1, -3).decimal() == "-0.125"
    assert DyadicRational(5, 3).decimal() == "40"
    d = DyadicRational(123456789, -70)
    assert Fraction(d.decimal()) == d.as_fraction()


@given(dyadics, st.integers(0, 100))
def test_floor_and_ceil_bracket(x, p):
    lo, hi = DyadicRational.floor(x, p), DyadicRational.ceil(x, p)
    assert lo <= x <= hi
    assert (hi - lo).as_fraction() in (0, Fraction(1, 2**p))


@given(dyadics, dyadics)
def test_exact_arithmetic(a, b):
    fa, fb = a.as_fraction(), b.as_fraction()
    assert (a + b).as_fraction() == fa + fb
    assert (a - b).as_fraction() == fa - fb
    assert (a * b).as_fraction() == fa * fb


def test_isqrt_newton_matches_stdlib():
    rng = random.Random(1)
    for _ in range(2000):
        n = rng.getrandbits(rng.randint(1, 600))
        assert isqrt_newton(n) == math.isqrt(n)
    for n in range(2000):
        assert isqrt_newton(n) == math.isqrt(n)


def test_iv_sqrt_perfect_square():
    r = iv_sqrt(DyadicInterval(4), 40)
    assert 2 in r and r.width.as_fraction() <= Fraction(4, 2**40)


def test_iv_sqrt_of_45():
    r = iv_sqrt(DyadicInterval(45), 64)
    # oracle: integer square root of 45 * 2^128
    s = math.isqrt(45 << 128)
    assert r.lo.as_fraction() <= Fraction(s + 1, 2**64)
    assert r.hi.as_fraction() >= Fraction(s, 2**64)
    assert r.width.as_fraction() <= Fraction(1, 2**60)
    with mpmath.workprec(300):
        root = mpmath.sqrt(45)
        assert mpmath.mpf(r.lo.mantissa) * mpmath.mpf(2) ** r.lo.exponent <= root
        assert mpmath.mpf(r.hi.mantissa) * mpmath.mpf(2) ** r.hi.exponent >= root


def test_iv_sqrt_zero_and_negative():
    assert iv_sqrt(DyadicInterval(0), 30) == DyadicInterval(0)
    with pytest.raises(NegativeInput):
        iv_sqrt(DyadicInterval(-1, 1), 30)


def test_iv_sqrt_width_bound():
    x = DyadicInterval(Fraction(9, 4), Fraction(9, 4) + Fraction(1, 2**30))
    r = iv_sqrt(x, 50)
    bound = x.width.as_fraction() / (2 * Fraction(3, 2)) + Fraction(4, 2**50)
    assert r.width.as_fraction() <= bound


def _rand_interval(rng, lo=-4.0, hi=4.0):
    a, b = sorted(rng.uniform(lo, hi) for _ in range(2))
    return DyadicInterval(Fraction(a), Fraction(b))


def _points(rng, iv, k=4):
    lo, hi = iv.lo.as_fraction(), iv.hi.as_fraction()
    return [lo, hi] + [lo + (hi - lo) * Fraction(rng.randint(0, 1000), 1000) for _ in range(k)]


def test_interval_operations_contain_point_images():
    rng = random.Random(7)
    p = 40
    checked = 0
    while checked < 10_000:
        a, b = _rand_interval(rng), _rand_interval(rng)
        pos = _rand_interval(rng, 0.0, 9.0)
        for x in _points(rng, a, 2):
            for y in _points(rng, b, 2):
                assert x + y in a + b
                assert x - y in a - b
                assert x * y in a * b
                assert x * y in (a * b).round(p)
                if not (b.lo <= 0 <= b.hi):
                    assert x / y in a.divide(b, p)
                checked += 1
        for t in _points(rng, pos):
            r = iv_sqrt(pos, p)
            assert r.lo.as_fraction() ** 2 <= t <= r.hi.as_fraction() ** 2


def test_pow_by_squaring_contains_power():
    x = DyadicInterval(Fraction(29, 32), Fraction(59, 64))
    r = x.pow(37, 80)
    assert r.lo.as_fraction() <= Fraction(29, 32) ** 37
    assert r.hi.as_fraction() >= Fraction(59, 64) ** 37


@settings(max_examples=50, deadline=None)
@given(st.fractions(min_value=-1, max_value=1, max_denominator=10**6), st.integers(20, 200))
def test_exp_enclosure_against_mpmath(x, p):
    r = exp_enclosure(x, p)
    with mpmath.workprec(p + 64):
        v = mpmath.exp(mpmath.mpf(x.numerator) / x.denominator)
        assert mpmath.mpf(r.lo.as_fraction().numerator) / r.lo.as_fraction().denominator <= v
        assert mpmath.mpf(r.hi.as_fraction().numerator) / r.hi.as_fraction().denominator >= v
    assert r.width.as_fraction() <= Fraction(4, 2**p)


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        DyadicInterval(1, 0)
