from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shtuka_degrees.exact_algebra import (
    CycNumber,
    ExpFraction,
    ExpPoly,
    IncompatibleError,
    NotRationalError,
    PoleAtCenterError,
    as_rational,
    central_derivative,
    cyclotomic_polynomial,
    reflect,
    root_of_unity,
    shift_argument,
    sqrt_q_power,
)

from oracles import numeric_derivative

Q = 5
t = ExpPoly.monomial(1, Q)

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def cyc(draw, order=None, q=Q):
    n = order or draw(st.sampled_from([1, 2, 3, 4, 6, 12]))
    phi = len(cyclotomic_polynomial(n)) - 1
    x = draw(st.lists(small, min_size=phi, max_size=phi))
    y = draw(st.lists(small, min_size=phi, max_size=phi))
    return CycNumber(x, y, n, q)


@st.composite
def expolys(draw, q=Q, span=3):
    keys = draw(st.lists(st.integers(-span, span), max_size=4, unique=True))
    return ExpPoly({k: draw(cyc(q=q)) for k in keys}, q)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_difference_of_squares():
    assert (t + 1) * (t - 1) == t * t - 1
    assert ((t + 1) * (t - 1)).terms.keys() == {0, 2}


def test_add_zero_is_identity():
    f = ExpPoly({-2: 3, 1: root_of_unity(3, 1, Q)}, Q)
    assert f + 0 == f
    assert f + ExpPoly({}, Q) == f


def test_mixed_orders_against_complex_embedding():
    a = ExpPoly({0: root_of_unity(2, 1, Q), 1: CycNumber(0, 1, 1, Q)}, Q)
    b = ExpPoly({-1: root_of_unity(3, 1, Q), 2: root_of_unity(3, 2, Q) + 1}, Q)
    prod = a * b
    assert max(c.order for c in prod.terms.values()) == 6
    for s in (0.3 + 0.1j, -0.7j, 1.1):
        assert abs(prod.to_complex(s) - a.to_complex(s) * b.to_complex(s)) < 1e-12


def test_incompatible_q():
    with pytest.raises(IncompatibleError):
        ExpPoly.monomial(1, 5) + ExpPoly.monomial(1, 7)


def test_sqrt_q_squared():
    u = sqrt_q_power(Q, 1)
    assert u * u == Q
    assert sqrt_q_power(Q, -3) * sqrt_q_power(Q, 3) == 1


def test_shift_examples():
    assert shift_argument(t * t, Fraction(1, 2)) == (t * t).scale(Fraction(1, Q))
    f = ExpPoly.monomial(-3, Q)
    assert shift_argument(f, Fraction(1, 2)) == f.scale(Q * sqrt_q_power(Q, 1))
    with pytest.raises(ValueError):
        shift_argument(f, Fraction(1, 3))


def test_reflect_examples():
    f = ExpPoly.monomial(3, Q) + 2
    assert reflect(f) == ExpPoly.monomial(-3, Q) + 2
    assert reflect(reflect(f)) == f
    g = f + reflect(f)
    assert reflect(g) == g


def test_central_derivative_examples():
    assert central_derivative(ExpPoly.monomial(-3, Q), 2).value == 9
    assert central_derivative(ExpPoly.constant(7, Q), 3).value == 0
    frac = (1 + t) / (1 - t.scale(Fraction(1, Q)))
    exact = central_derivative(frac, 1).as_rational()
    assert exact == Fraction(-15, 8)
    numeric = numeric_derivative(lambda s: frac.to_complex(s), 1) / math.log(Q)
    assert abs(numeric - float(exact)) < 1e-9


def test_removable_singularity_and_pole():
    # (1 - t^2)/(1 - t) = 1 + t has no pole at s = 0
    f = (1 - t * t) / (1 - t)
    assert central_derivative(f, 2).value == central_derivative(1 + t, 2).value
    with pytest.raises(PoleAtCenterError):
        central_derivative((1 + t) / (1 - t), 0)


def test_as_rational():
    assert as_rational(CycNumber(18)) == 18
    z = root_of_unity(3, 1)
    assert as_rational(z + z * z) == -1
    with pytest.raises(NotRationalError) as exc:
        as_rational(sqrt_q_power(Q, 1))
    assert "sqrt" in exc.value.reason
    with pytest.raises(NotRationalError):
        as_rational(root_of_unity(4, 1))


def test_divide_exact():
    p = (1 + t) * (1 - t.scale(3)) * ExpPoly.monomial(-2, Q)
    assert p.divide_exact(1 + t) == (1 - t.scale(3)) * ExpPoly.monomial(-2, Q)
    with pytest.raises(ArithmeticError):
        (1 + t * t).divide_exact(1 + t)


def test_fraction_equality_by_cross_multiplication():
    assert (t * t - 1) / (t - 1) == t + 1
    assert ExpFraction(t, 1 + t) != ExpFraction(1 + t, t)


@given(cyc(), cyc(), cyc())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a


@given(cyc())
@settings(max_examples=60, deadline=None)
def test_inverse_and_conjugation(a):
    assert a.conjugate().conjugate() == a
    if not a.is_zero():
        assert a * a.inverse() == 1


@given(cyc())
@settings(max_examples=40, deadline=None)
def test_json_round_trip(a):
    assert CycNumber.from_json(a.to_json(), Q) == a


@given(expolys(), expolys(), st.integers(0, 4))
@settings(max_examples=40, deadline=None)
def test_derivative_is_linear_and_leibniz(f, g, r):
    lin = central_derivative(f + g.scale(3), r).value
    assert lin == central_derivative(f, r).value + 3 * central_derivative(g, r).value
    leibniz = sum(
        (central_derivative(f, j).value * central_derivative(g, r - j).value * math.comb(r, j) for j in range(r + 1)),
        CycNumber(0),
    )
    assert central_derivative(f * g, r).value == leibniz


@given(expolys())
@settings(max_examples=40, deadline=None)
def test_symmetric_functions_have_vanishing_odd_derivatives(f):
    sym = f + reflect(f)
    for r in (1, 3, 5):
        assert central_derivative(sym, r).value.is_zero()


@given(expolys(), expolys(), st.sampled_from([Fraction(1, 2), Fraction(-1, 2), Fraction(1), Fraction(-3, 2)]))
@settings(max_examples=40, deadline=None)
def test_shift_commutes_with_arithmetic(f, g, delta):
    assert shift_argument(f * g, delta) == shift_argument(f, delta) * shift_argument(g, delta)
    assert shift_argument(f + g, delta) == shift_argument(f, delta) + shift_argument(g, delta)
    assert shift_argument(shift_argument(f, delta), -delta) == f
