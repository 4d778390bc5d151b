"""Independent reference computations used only by the tests."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction


def mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    return -result if m > 1 else result


def closed_point_counts(counts: list[int]) -> list[int]:
    """Number of closed points of each degree 1..len(counts), by Mobius inversion."""
    out = []
    for n in range(1, len(counts) + 1):
        total = sum(mobius(n // d) * counts[d - 1] for d in range(1, n + 1) if n % d == 0)
        assert total % n == 0
        out.append(total // n)
    return out


def effective_divisor_counts(counts: list[int]) -> list[int]:
    """A_0..A_m: effective divisors of each degree, from prod (1 - T^d)^{-b_d}."""
    m = len(counts)
    series = [1] + [0] * m
    for d, b in enumerate(closed_point_counts(counts), start=1):
        for _ in range(b):
            for k in range(d, m + 1):
                series[k] += series[k - d]
    return series


def poly_eval(coeffs, x, F):
    """Horner evaluation of an integer polynomial (low to high) in a FiniteField F."""
    acc = 0
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), F(c))
    return acc


def hyperelliptic_count(f: list[int], F) -> int:
    """#{y^2 = f(x)} projective, for f of even degree with square leading coefficient."""
    total = 2
    for x in F.elements():
        total += 1 + F.quadratic_character(poly_eval(f, x, F))
    return total


def fibre_product_count(f1: list[int], f2: list[int], F) -> int:
    """Points of the smooth model of {y1^2 = f1, y2^2 = f2}; both of even degree, monic."""
    total = 4
    for x in F.elements():
        total += (1 + F.quadratic_character(poly_eval(f1, x, F))) * (1 + F.quadratic_character(poly_eval(f2, x, F)))
    return total


def numeric_derivative(func, r: int, h: float = 0.1) -> complex:
    """r-th derivative at 0 by a complex-step Cauchy integral (trapezoid on a circle)."""
    m = 64
    acc = 0j
    for k in range(m):
        z = h * cmath.exp(2j * math.pi * k / m)
        acc += func(z) / z**r
    return acc / m * math.factorial(r)


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def as_fraction_list(values) -> list[Fraction]:
    return [Fraction(v) for v in values]
