from __future__ import annotations

import itertools

import pytest

from shtuka_degrees.elliptic import EllipticCurve, isogeny_map, two_isogenous
from shtuka_degrees.finite_field import FiniteField, field


@pytest.mark.parametrize("p,k", [(3, 1), (5, 1), (3, 2), (5, 2), (3, 3)])
def test_field_axioms(p, k):
    F = FiniteField(p, k)
    els = list(F.elements())
    assert len(els) == p**k
    one = F(1)
    for a, b in itertools.product(els[:12], repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        if b:
            assert F.mul(F.div(a, b), b) == a
    for a in els:
        assert F.power(a, p**k) == a
        assert F.add(a, F.neg(a)) == 0
    assert F.mul(one, F(p - 1)) == F.neg(one)
    # the prime field is fixed by Frobenius
    assert {a for a in els if F.frobenius(a) == a} == {F(c) for c in range(p)}


def test_square_roots():
    F = field(5, 2)
    squares = {F.mul(a, a) for a in F.elements()}
    for a in F.elements():
        assert F.is_square(a) == (a in squares)
        if a in squares:
            r = F.sqrt(a)
            assert F.mul(r, r) == a


def test_group_law():
    E = EllipticCurve.over(7, 1, 1)
    pts = E.points()
    assert len(pts) == E.count()
    for P, Q, R in itertools.islice(itertools.product(pts, repeat=3), 0, 400):
        assert E.add(E.add(P, Q), R) == E.add(P, E.add(Q, R))
        assert E.contains(E.add(P, Q))
    for P in pts:
        assert E.add(P, E.neg(P)) is None
        assert E.mul(len(pts), P) is None


def test_singular_model_rejected():
    with pytest.raises(ValueError):
        EllipticCurve.over(5, 2, 1)  # A^2 - 4B = 0


def test_isogeny_is_homomorphism_with_kernel():
    A, B = 0, -1
    E = EllipticCurve.over(5, A, B)
    A2, B2 = two_isogenous(A, B)
    E2 = EllipticCurve.over(5, A2, B2)
    F = E.F
    assert isogeny_map(E, E2, (0, 0)) is None
    pts = E.points()
    for P, Q in itertools.product(pts, repeat=2):
        lhs = isogeny_map(E, E2, E.add(P, Q))
        rhs = E2.add(isogeny_map(E, E2, P), isogeny_map(E, E2, Q))
        assert lhs == rhs
    # the dual composed with the isogeny is multiplication by 2
    for P in pts:
        assert isogeny_map(E2, E, isogeny_map(E, E2, P), dual=True) == E.mul(2, P)
    assert F.to_int(F(3)) == 3
