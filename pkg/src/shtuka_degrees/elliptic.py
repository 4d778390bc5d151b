"""Brute-force arithmetic on y^2 = x^3 + A x^2 + B x over finite fields."""

from __future__ import annotations

from typing import Optional

from .finite_field import FiniteField, field

Point = Optional[tuple[int, int]]  # None is the point at infinity
INFINITY: Point = None


class EllipticCurve:
    """The curve y^2 = x^3 + a x^2 + b x over a finite field (codes, not ints)."""

    def __init__(self, F: FiniteField, a: int, b: int):
        self.F = F
        self.a = a
        self.b = b
        disc = F.mul(F(16), F.mul(F.mul(b, b), F.sub(F.mul(a, a), F.mul(F(4), b))))
        if disc == 0:
            raise ValueError("singular model")

    @classmethod
    def over(cls, p: int, A: int, B: int, k: int = 1) -> EllipticCurve:
        F = field(p, k)
        return cls(F, F(A), F(B))

    def rhs(self, x: int) -> int:
        F = self.F
        return F.mul(x, F.add(F.mul(x, F.add(x, self.a)), self.b))

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        return self.F.mul(y, y) == self.rhs(x)

    def points(self) -> list[Point]:
        F = self.F
        pts: list[Point] = [INFINITY]
        for x in F.elements():
            r = self.rhs(x)
            if r == 0:
                pts.append((x, 0))
            elif F.is_square(r):
                y = F.sqrt(r)
                pts.append((x, y))
                pts.append((x, F.neg(y)))
        return pts

    def count(self) -> int:
        F = self.F
        total = 1
        for x in F.elements():
            total += 1 + F.quadratic_character(self.rhs(x))
        return total

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        return (P[0], self.F.neg(P[1]))

    def add(self, P: Point, Q: Point) -> Point:
        F = self.F
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if F.add(y1, y2) == 0:
                return None
            # tangent: (3x^2 + 2 a x + b) / 2y
            num = F.add(F.add(F.mul(F(3), F.mul(x1, x1)), F.mul(F(2), F.mul(self.a, x1))), self.b)
            lam = F.div(num, F.mul(F(2), y1))
        else:
            lam = F.div(F.sub(y2, y1), F.sub(x2, x1))
        x3 = F.sub(F.sub(F.sub(F.mul(lam, lam), self.a), x1), x2)
        y3 = F.sub(F.mul(lam, F.sub(x1, x3)), y1)
        return (x3, y3)

    def mul(self, n: int, P: Point) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(P))
        result: Point = None
        base = P
        while n:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    def order_of(self, P: Point) -> int:
        n, Q = 1, P
        while Q is not None:
            Q = self.add(Q, P)
            n += 1
        return n

    def frobenius(self, P: Point, times: int = 1) -> Point:
        if P is None:
            return None
        return (self.F.frobenius(P[0], times), self.F.frobenius(P[1], times))


def two_isogenous(A: int, B: int) -> tuple[int, int]:
    """Coefficients of the target of the 2-isogeny with kernel (0, 0)."""
    return -2 * A, A * A - 4 * B


def isogeny_map(E: EllipticCurve, target: EllipticCurve, P: Point, dual: bool = False) -> Point:
    """Apply the 2-isogeny with kernel (0,0) from E.

    With ``dual=True`` the image on y^2 = x^3 + 4a x^2 + 16 b x is rescaled by
    (x, y) -> (x/4, y/8), landing on the curve E came from.
    """
    F = E.F
    if P is None or P[0] == 0:
        return None
    x, y = P
    x2 = F.mul(x, x)
    X = F.div(F.mul(y, y), x2)
    Y = F.div(F.mul(y, F.sub(E.b, x2)), x2)
    if dual:
        X = F.div(X, F(4))
        Y = F.div(Y, F(8))
    Q = (X, Y)
    assert target.contains(Q)
    return Q
