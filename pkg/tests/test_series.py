"""Truncation-aware Laurent series over exact coefficient towers."""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from formalconn.errors import PrecisionError
from formalconn.scalars import QQ, CyclotomicTower
from formalconn.series import DEFAULT_TRUNC, LaurentSeries

from conftest import random_laurent, seeded

fractions = st.fractions(
    min_value=-9, max_value=9, max_denominator=6
)
exponents = st.integers(min_value=-4, max_value=5)
polys = st.dictionaries(exponents, fractions, max_size=5).map(
    lambda d: LaurentSeries.from_terms(QQ, list(d.items()))
)


@given(polys, polys, polys)
@settings(max_examples=80, deadline=None)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + LaurentSeries.zero() == a
    assert a * LaurentSeries.one() == a
    assert (a - a).is_exact_zero()


@given(polys, polys)
@settings(max_examples=40, deadline=None)
def test_product_against_sympy(a, b):
    t = sympy.Symbol("t")

    def lift(s):
        return sum(sympy.Rational(c) * t**sympy.Rational(e) for e, c in s.terms())

    assert sympy.expand(lift(a * b) - lift(a) * lift(b)) == 0


@given(polys)
@settings(max_examples=40, deadline=None)
def test_derivative_against_sympy(a):
    t = sympy.Symbol("t")
    lifted = sum(sympy.Rational(c) * t**sympy.Rational(e) for e, c in a.terms())
    ours = sum(sympy.Rational(c) * t**sympy.Rational(e) for e, c in a.derivative().terms())
    assert sympy.expand(ours - sympy.diff(lifted, t)) == 0


def test_normalization_drops_zero_terms():
    s = LaurentSeries.from_terms(QQ, [(2, Fraction(0)), (1, Fraction(3))])
    assert s.terms() == [(Fraction(1), Fraction(3))]
    assert (s - s).is_exact_zero()
    assert LaurentSeries.from_terms(QQ, []).is_exact_zero()


def test_order_and_valuation_bound():
    s = LaurentSeries.from_terms(QQ, [(-2, Fraction(1)), (3, Fraction(5))])
    assert s.order() == -2
    assert s.valuation_bound() == -2
    z = LaurentSeries.zero(trunc=4)
    assert z.order() is None
    assert z.valuation_bound() == 4
    assert LaurentSeries.zero().valuation_bound() is None


def test_truncation_propagates_through_addition():
    a = LaurentSeries.from_terms(QQ, [(0, Fraction(1))], trunc=3)
    b = LaurentSeries.from_terms(QQ, [(5, Fraction(2))])
    s = a + b
    assert s.trunc_order() == 3
    # the t^5 term of b sits beyond the truncation and must not survive
    assert s.terms() == [(Fraction(0), Fraction(1))]


def test_truncation_propagates_through_multiplication():
    # (1 + O(t^2)) * t^-1 is known exactly below t^1
    a = LaurentSeries.from_terms(QQ, [(0, Fraction(1))], trunc=2)
    b = LaurentSeries.monomial(-1)
    p = a * b
    assert p.trunc_order() == 1
    assert p.order() == -1
    rng = seeded(5)
    for _ in range(30):
        x = random_laurent(rng, trunc=rng.randrange(2, 6))
        y = random_laurent(rng)
        if x.order() is None or y.order() is None:
            continue
        expect = x.trunc_order() + y.order()
        assert (x * y).trunc_order() == expect


def test_coefficient_access_and_precision_error():
    s = LaurentSeries.from_terms(QQ, [(-1, Fraction(2)), (1, Fraction(7))], trunc=3)
    assert s.coefficient(-1) == 2
    assert s.coefficient(0) == 0
    assert s.coefficient(Fraction(1, 2)) == 0
    with pytest.raises(PrecisionError):
        s.coefficient(3)
    with pytest.raises(PrecisionError):
        s.coefficient(10)
    assert s.known_coefficient(10) == 0


def test_invert_exact_monomial_stays_exact():
    m = LaurentSeries.monomial(-3, Fraction(2))
    inv = m.invert()
    assert inv.is_exact()
    assert inv.terms() == [(Fraction(3), Fraction(1, 2))]
    assert (m * inv) == LaurentSeries.one()


def test_invert_series():
    one = LaurentSeries.one()
    t = LaurentSeries.variable()
    g = (one - t).invert(order=8)
    # geometric series
    assert g.terms() == [(Fraction(k), Fraction(1)) for k in range(8)]
    prod = (one - t) * g
    assert prod.agrees_with(one)
    with pytest.raises(ZeroDivisionError):
        LaurentSeries.zero().invert()


def test_invert_default_precision():
    one = LaurentSeries.one()
    t = LaurentSeries.variable()
    s = one + t
    inv = s.invert()
    assert inv.trunc_order() == DEFAULT_TRUNC
    assert (s * inv).agrees_with(one)


def test_invert_randomized_roundtrip():
    rng = seeded(11)
    one = LaurentSeries.one()
    for _ in range(25):
        s = random_laurent(rng, lo=-2, hi=3)
        if s.order() is None:
            continue
        inv = s.invert(order=6)
        assert (s * inv).agrees_with(one)


def test_invert_against_sympy():
    t = sympy.Symbol("t")
    s = LaurentSeries.from_terms(
        QQ, [(0, Fraction(2)), (1, Fraction(-1)), (3, Fraction(1, 3))]
    )
    inv = s.invert(order=7)
    lifted = 2 - t + sympy.Rational(1, 3) * t**3
    expansion = sympy.series(1 / lifted, t, 0, 7).removeO()
    for e, c in inv.terms():
        assert sympy.Rational(c) == expansion.coeff(t, int(e))


def test_power_including_negative():
    t = LaurentSeries.variable()
    s = LaurentSeries.one() + t
    assert (s**3).terms() == [
        (Fraction(0), Fraction(1)),
        (Fraction(1), Fraction(3)),
        (Fraction(2), Fraction(3)),
        (Fraction(3), Fraction(1)),
    ]
    assert (s**0) == LaurentSeries.one()
    neg = s**-2
    assert (neg * s * s).agrees_with(LaurentSeries.one())


def test_shift_and_ramified_exponents():
    s = LaurentSeries.from_terms(QQ, [(0, Fraction(1)), (1, Fraction(1))])
    half = s.shift(Fraction(1, 2))
    assert half.terms() == [
        (Fraction(1, 2), Fraction(1)),
        (Fraction(3, 2), Fraction(1)),
    ]
    assert half.ram == 2
    # shifting back restores integral support
    assert half.shift(Fraction(-1, 2)) == s


def test_ramified_pullback():
    s = LaurentSeries.from_terms(QQ, [(-1, Fraction(2)), (2, Fraction(3))], trunc=4)
    p = s.ramified_pullback(3)
    assert p.terms() == [(Fraction(-3), Fraction(2)), (Fraction(6), Fraction(3))]
    assert p.trunc_order() == 12
    with pytest.raises(ValueError):
        s.ramified_pullback(0)


def test_invert_variable():
    s = LaurentSeries.from_terms(QQ, [(-2, Fraction(5)), (1, Fraction(1))])
    flipped = s.invert_variable()
    assert flipped.terms() == [(Fraction(-1), Fraction(1)), (Fraction(2), Fraction(5))]
    assert flipped.invert_variable() == s
    with pytest.raises(PrecisionError):
        LaurentSeries.from_terms(QQ, [(0, Fraction(1))], trunc=5).invert_variable()


def test_truncate():
    s = LaurentSeries.from_terms(QQ, [(0, Fraction(1)), (4, Fraction(2))])
    cut = s.truncate(3)
    assert cut.trunc_order() == 3
    assert cut.terms() == [(Fraction(0), Fraction(1))]
    # truncating cannot increase precision
    assert s.truncate(5).truncate(2).trunc_order() == 2


def test_derivative_drops_precision_by_one():
    s = LaurentSeries.from_terms(QQ, [(-1, Fraction(1)), (2, Fraction(3))], trunc=6)
    d = s.derivative()
    assert d.trunc_order() == 5
    assert d.terms() == [(Fraction(-2), Fraction(-1)), (Fraction(1), Fraction(6))]


def test_mixed_tower_arithmetic():
    c4 = CyclotomicTower(4)
    i = LaurentSeries.from_terms(c4, [(0, c4.zeta())])
    s = LaurentSeries.variable() + i
    assert s.tower is c4
    sq = i * i
    assert sq == LaurentSeries.rational_constant(-1)


def test_agrees_with_respects_explicit_order():
    a = LaurentSeries.from_terms(QQ, [(0, Fraction(1)), (3, Fraction(9))])
    b = LaurentSeries.from_terms(QQ, [(0, Fraction(1))])
    assert a.agrees_with(b, order=3)
    assert not a.agrees_with(b, order=4)
    assert not a.agrees_with(b)
