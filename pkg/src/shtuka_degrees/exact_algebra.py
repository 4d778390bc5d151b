"""Exact arithmetic in Q(zeta_N)(sqrt q) and Laurent expressions in t = q^{-s}.

Every quantity in this package is a finite Laurent expression ``sum c_k t^k``
whose coefficients live in the ring ``Q(zeta_N)[u]/(u^2 - q)``.  Derivatives
in ``s`` are carried in units of ``(log q)^r`` so that all outputs stay exact.

When ``sqrt(q)`` already lies in ``Q(zeta_N)`` (e.g. ``q = 3`` and ``12 | N``)
the coefficient ring is not a field and an element may have two distinct
representations; every formula in the package is an identity in the formal
ring, so comparisons remain sound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

__all__ = [
    "CycNumber",
    "ExpPoly",
    "ExpFraction",
    "DerivativeValue",
    "NotRationalError",
    "PoleAtCenterError",
    "IncompatibleError",
    "as_rational",
    "central_derivative",
    "shift_argument",
    "reflect",
    "cyclotomic_polynomial",
    "root_of_unity",
    "sqrt_q_power",
]

Scalar = Union[int, Fraction]


class IncompatibleError(ValueError):
    """Operands carry different base cardinalities q."""


class NotRationalError(ValueError):
    def __init__(self, value: "CycNumber", reason: str):
        self.value = value
        self.reason = reason
        super().__init__(f"value is not rational ({reason}): {value!r}")


class PoleAtCenterError(ZeroDivisionError):
    """The expression has a pole at s = 0."""


# --------------------------------------------------------------------------
# cyclotomic bookkeeping


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] // lead
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    return out, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


@lru_cache(maxsize=None)
def _phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int, upto: int) -> tuple[tuple[int, ...], ...]:
    """Coordinates of zeta_n^j, 0 <= j < upto, in the power basis."""
    phi = _phi(n)
    cyc = cyclotomic_polynomial(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(upto):
        rows.append(tuple(cur))
        # multiply by zeta and reduce
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * cyc[i] for i, c in enumerate(cur)]
    return tuple(rows)


def _reduce(coeffs: Iterable[Fraction], n: int) -> tuple[Fraction, ...]:
    """Reduce a polynomial in zeta_n (any length) modulo Phi_n."""
    coeffs = list(coeffs)
    phi = _phi(n)
    if len(coeffs) <= phi:
        return tuple(coeffs) + (Fraction(0),) * (phi - len(coeffs))
    table = _power_table(n, n)
    out = [Fraction(0)] * phi
    for j, c in enumerate(coeffs):
        if c:
            row = table[j % n]
            for i, v in enumerate(row):
                if v:
                    out[i] += c * v
    return tuple(out)


def _mul_vec(a: tuple[Fraction, ...], b: tuple[Fraction, ...], n: int) -> tuple[Fraction, ...]:
    if len(a) == 1:
        return (a[0] * b[0],)
    if not any(a) or not any(b):
        return (Fraction(0),) * _phi(n)
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    return _reduce(prod, n)


def _widen(vec: tuple[Fraction, ...], n: int, m: int) -> tuple[Fraction, ...]:
    if n == m:
        return vec
    step = m // n
    spread = [Fraction(0)] * (step * (len(vec) - 1) + 1)
    for i, c in enumerate(vec):
        spread[i * step] = c
    return _reduce(spread, m)


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        quo[shift] = c
        for i, v in enumerate(b):
            a[shift + i] -= c * v
        a.pop()
        _poly_trim(a)
    return quo, a


def _inverse_mod_cyclotomic(vec: tuple[Fraction, ...], n: int) -> tuple[Fraction, ...]:
    """Inverse in Q[z]/(Phi_n) by the extended Euclidean algorithm."""
    modulus = [Fraction(c) for c in cyclotomic_polynomial(n)]
    r0, r1 = modulus, _poly_trim(list(vec))
    s0: list[Fraction] = []
    s1: list[Fraction] = [Fraction(1)]
    if not r1:
        raise ZeroDivisionError("inverse of zero")
    while len(r1) > 1:
        quo, rem = _poly_divmod(r0, r1)
        prod = [Fraction(0)] * (len(quo) + len(s1))
        for i, x in enumerate(quo):
            for j, y in enumerate(s1):
                prod[i + j] += x * y
        new_s = [Fraction(0)] * max(len(s0), len(prod))
        for i, x in enumerate(s0):
            new_s[i] += x
        for i, x in enumerate(prod):
            new_s[i] -= x
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_trim(new_s)
        if not r1:
            raise ZeroDivisionError("element is a zero divisor")
    c = r1[0]
    return _reduce([x / c for x in s1], n)


# --------------------------------------------------------------------------
# CycNumber


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot interpret {v!r} as an exact rational")


def _merge_q(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise IncompatibleError(f"incompatible base cardinalities q={a} and q={b}")


class CycNumber:
    """An element ``x + y*sqrt(q)`` with ``x, y`` in ``Q(zeta_N)``.

    ``x`` and ``y`` are stored in the power basis ``1, zeta, ..., zeta^{phi(N)-1}``.
    ``q`` may be ``None`` while the ``sqrt(q)`` part is zero.
    """

    __slots__ = ("order", "q", "x", "y")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, x=0, y=0, order: int = 1, q: int | None = None):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        self.x = self._coerce_vec(x, order)
        self.y = self._coerce_vec(y, order)
        if any(self.y) and q is None:
            raise ValueError("a sqrt(q) part requires q")
        self.q = q

    @staticmethod
    def _coerce_vec(v, order: int) -> tuple[Fraction, ...]:
        if isinstance(v, (int, Fraction, str)):
            return _reduce([_frac(v)], order)
        return _reduce([_frac(c) for c in v], order)

    @classmethod
    def _raw(cls, x: tuple, y: tuple, order: int, q: int | None) -> CycNumber:
        obj = cls.__new__(cls)
        obj.order, obj.x, obj.y, obj.q = order, x, y, q
        return obj

    # ---- coercion
    @classmethod
    def coerce(cls, value, q: int | None = None) -> CycNumber:
        if isinstance(value, CycNumber):
            return value
        return cls(value, 0, 1, q)

    def widen(self, order: int) -> CycNumber:
        if order % self.order:
            raise ValueError(f"cannot widen order {self.order} to {order}")
        if order == self.order:
            return self
        return CycNumber._raw(
            _widen(self.x, self.order, order), _widen(self.y, self.order, order), order, self.q
        )

    def _align(self, other) -> tuple[CycNumber, CycNumber]:
        other = CycNumber.coerce(other, self.q)
        q = _merge_q(self.q, other.q)
        m = math.lcm(self.order, other.order)
        a, b = self.widen(m), other.widen(m)
        if a.q != q:
            a = CycNumber._raw(a.x, a.y, m, q)
        if b.q != q:
            b = CycNumber._raw(b.x, b.y, m, q)
        return a, b

    # ---- ring structure
    def __add__(self, other) -> CycNumber:
        if not isinstance(other, (CycNumber, int, Fraction)):
            return NotImplemented
        a, b = self._align(other)
        return CycNumber._raw(
            tuple(i + j for i, j in zip(a.x, b.x)), tuple(i + j for i, j in zip(a.y, b.y)), a.order, a.q
        )

    __radd__ = __add__

    def __neg__(self) -> CycNumber:
        return CycNumber._raw(tuple(-i for i in self.x), tuple(-i for i in self.y), self.order, self.q)

    def __sub__(self, other) -> CycNumber:
        if not isinstance(other, (CycNumber, int, Fraction)):
            return NotImplemented
        return self + (-CycNumber.coerce(other, self.q))

    def __rsub__(self, other) -> CycNumber:
        return CycNumber.coerce(other, self.q) - self

    def __mul__(self, other) -> CycNumber:
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return CycNumber._raw(tuple(i * c for i in self.x), tuple(i * c for i in self.y), self.order, self.q)
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._align(other)
        n = a.order
        if not any(a.y) and not any(b.y):
            return CycNumber._raw(_mul_vec(a.x, b.x, n), a.y, n, a.q)
        xx = _mul_vec(a.x, b.x, n)
        yy = _mul_vec(a.y, b.y, n)
        xy = _mul_vec(a.x, b.y, n)
        yx = _mul_vec(a.y, b.x, n)
        q = a.q if a.q is not None else 0
        return CycNumber._raw(
            tuple(i + q * j for i, j in zip(xx, yy)), tuple(i + j for i, j in zip(xy, yx)), n, a.q
        )

    __rmul__ = __mul__

    def __pow__(self, e: int) -> CycNumber:
        if e < 0:
            return self.inverse() ** (-e)
        result = CycNumber(1, 0, self.order, self.q)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> CycNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.order
        if not any(self.y):
            return CycNumber._raw(_inverse_mod_cyclotomic(self.x, n), self.y, n, self.q)
        # (x + y u)^{-1} = (x - y u) / (x^2 - q y^2)
        norm = tuple(
            i - self.q * j for i, j in zip(_mul_vec(self.x, self.x, n), _mul_vec(self.y, self.y, n))
        )
        inv = _inverse_mod_cyclotomic(norm, n)
        return CycNumber._raw(_mul_vec(self.x, inv, n), tuple(-c for c in _mul_vec(self.y, inv, n)), n, self.q)

    def __truediv__(self, other) -> CycNumber:
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> CycNumber:
        return CycNumber.coerce(other, self.q) * self.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, (CycNumber, int, Fraction)):
            return NotImplemented
        try:
            a, b = self._align(other)
        except IncompatibleError:
            return False
        return a.x == b.x and a.y == b.y

    def is_zero(self) -> bool:
        return not any(self.x) and not any(self.y)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # ---- structure
    def conjugate(self) -> CycNumber:
        """Complex conjugation: zeta -> zeta^{-1}, sqrt(q) fixed."""
        n = self.order

        def conj(vec):
            spread = [Fraction(0)] * n
            for i, c in enumerate(vec):
                spread[(-i) % n] += c
            return _reduce(spread, n)

        return CycNumber._raw(conj(self.x), conj(self.y), n, self.q)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.order)
        x = sum(float(c) * z**i for i, c in enumerate(self.x))
        if any(self.y):
            x += math.sqrt(self.q) * sum(float(c) * z**i for i, c in enumerate(self.y))
        return complex(x)

    def __repr__(self) -> str:
        if not any(self.y) and not any(self.x[1:]):
            return f"CycNumber({self.x[0]})"
        return f"CycNumber(x={[str(c) for c in self.x]}, y={[str(c) for c in self.y]}, N={self.order}, q={self.q})"

    def __str__(self) -> str:
        def part(vec):
            terms = []
            for i, c in enumerate(vec):
                if c:
                    terms.append(str(c) if i == 0 else f"{c}*z^{i}")
            return " + ".join(terms)

        xs, ys = part(self.x), part(self.y)
        if not ys:
            return xs or "0"
        s = f"({ys})*sqrt({self.q})"
        return f"{xs} + {s}" if xs else s

    def to_json(self):
        """Rational values as ``"p/q"`` strings, others as coordinate vectors with N."""
        try:
            return str(as_rational(self))
        except NotRationalError:
            out = {"N": self.order, "x": [str(c) for c in self.x]}
            if any(self.y):
                out["y"] = [str(c) for c in self.y]
                out["q"] = self.q
            return out

    @classmethod
    def from_json(cls, data, q: int | None = None) -> CycNumber:
        if isinstance(data, (int, str)):
            return cls(_frac(data), 0, 1, q)
        if isinstance(data, dict):
            order = int(data.get("N", 1))
            return cls(data.get("x", [0]), data.get("y", [0]), order, data.get("q", q))
        raise TypeError(f"cannot decode coefficient {data!r}")


def root_of_unity(order: int, exponent: int, q: int | None = None) -> CycNumber:
    """``zeta_order ** exponent`` reduced in the power basis."""
    exponent %= order
    spread = [Fraction(0)] * (exponent + 1)
    spread[exponent] = Fraction(1)
    return CycNumber._raw(_reduce(spread, order), (Fraction(0),) * _phi(order), order, q)


def sqrt_q_power(q: int, m: int) -> CycNumber:
    """Exact ``(sqrt q) ** m`` for any integer m."""
    half, odd = divmod(m, 2)
    scale = Fraction(q) ** half
    if odd:
        return CycNumber(0, scale, 1, q)
    return CycNumber(scale, 0, 1, q)


def as_rational(c) -> Fraction:
    """Return ``c`` as a Fraction, or raise NotRationalError naming the obstruction."""
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if any(c.y):
        raise NotRationalError(c, "nonzero sqrt(q) part")
    if any(c.x[1:]):
        raise NotRationalError(c, "nonconstant cyclotomic coordinates")
    if c.conjugate() != c:
        raise NotRationalError(c, "not fixed by complex conjugation")
    return c.x[0]


# --------------------------------------------------------------------------
# Laurent expressions


def _coerce_coeff(c, q: int) -> CycNumber:
    c = CycNumber.coerce(c, q)
    if c.q is not None and c.q != q:
        raise IncompatibleError(f"coefficient carries q={c.q}, expression q={q}")
    return c if c.q == q else CycNumber._raw(c.x, c.y, c.order, q)


class ExpPoly:
    """Finite Laurent expression ``sum_k c_k t^k`` with ``t = q^{-s}``."""

    __slots__ = ("q", "terms")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, terms: Mapping[int, object] | None = None, q: int = 0):
        if q < 2:
            raise ValueError("q must be a prime power >= 2")
        self.q = q
        clean: dict[int, CycNumber] = {}
        for k, c in (terms or {}).items():
            c = _coerce_coeff(c, q)
            if not c.is_zero():
                clean[int(k)] = c
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def constant(cls, c, q: int) -> ExpPoly:
        return cls({0: c}, q)

    @classmethod
    def monomial(cls, k: int, q: int, c=1) -> ExpPoly:
        """``c * t^k``; note ``q^{a s} = t^{-a}``."""
        return cls({k: c}, q)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, q: int, start: int = 0) -> ExpPoly:
        return cls({start + i: c for i, c in enumerate(coeffs)}, q)

    def _check(self, other: ExpPoly) -> None:
        if other.q != self.q:
            raise IncompatibleError(f"incompatible q values {self.q} and {other.q}")

    def _lift(self, other) -> ExpPoly:
        if isinstance(other, ExpPoly):
            self._check(other)
            return other
        return ExpPoly.constant(other, self.q)

    # ---- ring operations
    def __add__(self, other) -> ExpPoly:
        if isinstance(other, ExpFraction):
            return NotImplemented
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return ExpPoly(out, self.q)

    __radd__ = __add__

    def __neg__(self) -> ExpPoly:
        return ExpPoly({k: -c for k, c in self.terms.items()}, self.q)

    def __sub__(self, other) -> ExpPoly:
        if isinstance(other, ExpFraction):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other) -> ExpPoly:
        return self._lift(other) - self

    def __mul__(self, other) -> ExpPoly:
        if isinstance(other, ExpFraction):
            return NotImplemented
        if isinstance(other, (int, Fraction, CycNumber)):
            return self.scale(other)
        other = self._lift(other)
        out: dict[int, CycNumber] = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                p = a * b
                out[i + j] = out[i + j] + p if i + j in out else p
        return ExpPoly(out, self.q)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> ExpPoly:
        if e < 0:
            raise ValueError("negative powers are ExpFraction territory")
        result = ExpPoly.constant(1, self.q)
        for _ in range(e):
            result = result * self
        return result

    def __truediv__(self, other) -> ExpFraction:
        if isinstance(other, (int, Fraction, CycNumber)):
            return ExpFraction(self.scale(CycNumber.coerce(other, self.q).inverse()), ExpPoly.constant(1, self.q))
        return ExpFraction(self, ExpPoly.constant(1, self.q)) / other

    def __rtruediv__(self, other) -> ExpFraction:
        return ExpFraction(self._lift(other), self)

    def scale(self, c) -> ExpPoly:
        c = _coerce_coeff(c, self.q)
        return ExpPoly({k: v * c for k, v in self.terms.items()}, self.q)

    def __eq__(self, other) -> bool:
        if isinstance(other, ExpFraction):
            return other == self
        if isinstance(other, (int, Fraction, CycNumber)):
            other = ExpPoly.constant(other, self.q)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        if other.q != self.q or other.terms.keys() != self.terms.keys():
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    # ---- structure
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return set(self.terms) <= {0}

    @property
    def min_degree(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def max_degree(self) -> int:
        return max(self.terms) if self.terms else 0

    def coefficient(self, k: int) -> CycNumber:
        return self.terms.get(k, CycNumber(0, 0, 1, self.q))

    def value_at_center(self) -> CycNumber:
        """Evaluation at s = 0, i.e. t = 1."""
        total = CycNumber(0, 0, 1, self.q)
        for c in self.terms.values():
            total = total + c
        return total

    def reflect(self) -> ExpPoly:
        return ExpPoly({-k: c for k, c in self.terms.items()}, self.q)

    def shift(self, delta) -> ExpPoly:
        return shift_argument(self, delta)

    def substitute(self, factor=1, power: int = 1) -> ExpPoly:
        """Replace t by ``factor * t**power``."""
        factor = _coerce_coeff(factor, self.q)
        out = {}
        for k, c in self.terms.items():
            out[k * power] = c * (factor**k)
        return ExpPoly(out, self.q)

    def moment(self, j: int) -> CycNumber:
        """``sum_k c_k (-k)^j``: the j-th s-derivative at 0 in units of (log q)^j."""
        return self.moments(j)[j]

    def moments(self, upto: int) -> list[CycNumber]:
        """``[moment(0), ..., moment(upto)]`` in one pass over integer coordinates."""
        if not self.terms:
            return [CycNumber(0, 0, 1, self.q) for _ in range(upto + 1)]
        m = math.lcm(*(c.order for c in self.terms.values()))
        q = None
        for c in self.terms.values():
            q = _merge_q(q, c.q)
        rows = [(k, c.widen(m)) for k, c in self.terms.items()]
        den = math.lcm(*(v.denominator for _, c in rows for v in c.x + c.y))
        ints = [(-k, [int(v * den) for v in c.x + c.y]) for k, c in rows]
        width = len(ints[0][1])
        half = width // 2
        out = []
        for j in range(upto + 1):
            acc = [0] * width
            for w, vec in ints:
                wj = w**j
                if wj:
                    for i in range(width):
                        acc[i] += wj * vec[i]
            vals = tuple(Fraction(a, den) for a in acc)
            out.append(CycNumber._raw(vals[:half], vals[half:], m, q))
        return out

    def to_complex(self, s: complex) -> complex:
        t = complex(self.q) ** (-s)
        return sum(c.to_complex() * t**k for k, c in self.terms.items())

    def to_pairs(self) -> list[list]:
        return [[k, c.to_json()] for k, c in self.terms.items()]

    @classmethod
    def from_pairs(cls, pairs, q: int) -> ExpPoly:
        out: dict[int, CycNumber] = {}
        for k, c in pairs:
            v = CycNumber.from_json(c, q)
            out[int(k)] = out[int(k)] + v if int(k) in out else v
        return cls(out, q)

    def __repr__(self) -> str:
        return f"ExpPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms.items():
            cs = str(c)
            if k == 0:
                parts.append(cs)
            else:
                mono = "t" if k == 1 else f"t^{k}"
                parts.append(mono if cs == "1" else f"({cs})*{mono}")
        return " + ".join(parts)

    def divide_exact(self, other: ExpPoly) -> ExpPoly:
        """Exact Laurent division; raises ArithmeticError on a nonzero remainder."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero expression")
        if self.is_zero():
            return ExpPoly({}, self.q)
        a0, b0 = self.min_degree, other.min_degree
        rem = {k - a0: c for k, c in self.terms.items()}
        den = {k - b0: c for k, c in other.terms.items()}
        dtop = max(den)
        lead_inv = den[dtop].inverse()
        quo: dict[int, CycNumber] = {}
        while rem and max(rem) >= dtop:
            top = max(rem)
            c = rem[top] * lead_inv
            shift = top - dtop
            quo[shift] = c
            for k, v in den.items():
                key = k + shift
                nv = (rem[key] - c * v) if key in rem else -(c * v)
                if nv.is_zero():
                    rem.pop(key, None)
                else:
                    rem[key] = nv
        if rem:
            raise ArithmeticError("division leaves a nonzero remainder")
        return ExpPoly({k + a0 - b0: c for k, c in quo.items()}, self.q)


def _as_fraction(f) -> ExpFraction:
    if isinstance(f, ExpFraction):
        return f
    return ExpFraction(f, ExpPoly.constant(1, f.q))


class ExpFraction:
    """Quotient of two ExpPoly; equality by cross-multiplication."""

    __slots__ = ("num", "den")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, num: ExpPoly, den: ExpPoly):
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("ExpFraction with zero denominator")
        self.num = num
        self.den = den

    @property
    def q(self) -> int:
        return self.num.q

    def _lift(self, other) -> ExpFraction:
        if isinstance(other, ExpFraction):
            self.num._check(other.num)
            return other
        if isinstance(other, ExpPoly):
            self.num._check(other)
            return _as_fraction(other)
        return _as_fraction(ExpPoly.constant(other, self.q))

    def __add__(self, other) -> ExpFraction:
        o = self._lift(other)
        if o.den == self.den:
            return ExpFraction(self.num + o.num, self.den)
        return ExpFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> ExpFraction:
        return ExpFraction(-self.num, self.den)

    def __sub__(self, other) -> ExpFraction:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> ExpFraction:
        return self._lift(other) - self

    def __mul__(self, other) -> ExpFraction:
        if isinstance(other, (int, Fraction, CycNumber)):
            return ExpFraction(self.num.scale(other), self.den)
        o = self._lift(other)
        return ExpFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> ExpFraction:
        if isinstance(other, (int, Fraction, CycNumber)):
            return ExpFraction(self.num, self.den.scale(other))
        o = self._lift(other)
        return ExpFraction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> ExpFraction:
        return self._lift(other) / self

    def scale(self, c) -> ExpFraction:
        return ExpFraction(self.num.scale(c), self.den)

    def __eq__(self, other) -> bool:
        if isinstance(other, (ExpPoly, ExpFraction, int, Fraction, CycNumber)):
            try:
                o = self._lift(other)
            except IncompatibleError:
                return False
            return self.num * o.den == o.num * self.den
        return NotImplemented

    def reflect(self) -> ExpFraction:
        return ExpFraction(self.num.reflect(), self.den.reflect())

    def shift(self, delta) -> ExpFraction:
        return ExpFraction(shift_argument(self.num, delta), shift_argument(self.den, delta))

    def substitute(self, factor=1, power: int = 1) -> ExpFraction:
        return ExpFraction(self.num.substitute(factor, power), self.den.substitute(factor, power))

    def to_poly(self) -> ExpPoly:
        """Exact quotient as an ExpPoly; ArithmeticError if it is not one."""
        return self.num.divide_exact(self.den)

    def simplify(self) -> ExpPoly | ExpFraction:
        try:
            return self.to_poly()
        except ArithmeticError:
            return self

    def to_complex(self, s: complex) -> complex:
        return self.num.to_complex(s) / self.den.to_complex(s)

    def __repr__(self) -> str:
        return f"ExpFraction(({self.num}) / ({self.den}))"


@dataclass(frozen=True)
class DerivativeValue:
    """``(1/(log q)^r) d^r/ds^r f`` at s = 0."""

    r: int
    value: CycNumber

    def as_rational(self) -> Fraction:
        return as_rational(self.value)


# --------------------------------------------------------------------------
# operators


def shift_argument(f, delta) -> ExpPoly | ExpFraction:
    """The substitution s -> s + delta for half-integral delta."""
    delta = Fraction(delta)
    if (2 * delta).denominator != 1:
        raise ValueError("shift must be a half-integer")
    if isinstance(f, ExpFraction):
        return f.shift(delta)
    two_delta = int(2 * delta)
    # t^k -> q^{-k delta} t^k = (sqrt q)^{-k * 2 delta} t^k
    return ExpPoly({k: c * sqrt_q_power(f.q, -k * two_delta) for k, c in f.terms.items()}, f.q)


def reflect(f):
    """The substitution s -> -s."""
    return f.reflect()


def _taylor(f: ExpPoly, upto: int) -> list[CycNumber]:
    """Coefficients of f as a power series in u = s log q, through u^upto."""
    return [c / math.factorial(j) for j, c in enumerate(f.moments(upto))]


def central_derivative(f, r: int) -> DerivativeValue:
    """``(1/(log q)^r) * d^r/ds^r f`` at s = 0, exactly.

    Uses the derivation ``D(t^k) = -k t^k``; for fractions the quotient is taken
    as a power series in s, so removable singularities at the center cancel.
    """
    if r < 0:
        raise ValueError("derivative order must be nonnegative")
    if isinstance(f, ExpPoly):
        return DerivativeValue(r, f.moment(r))
    if not isinstance(f, ExpFraction):
        raise TypeError(f"cannot differentiate {type(f).__name__}")
    # a nonzero Laurent polynomial with m terms vanishes to order < m at s = 0
    v = 0
    while f.den.moment(v).is_zero():
        v += 1
        if v >= len(f.den.terms):
            raise ValueError("denominator is identically zero")
    num_series = _taylor(f.num, r + v)
    if any(not c.is_zero() for c in num_series[:v]):
        raise PoleAtCenterError("expression has a pole at s = 0")
    den_series = _taylor(f.den, r + v)
    a = num_series[v:]
    b = den_series[v:]
    inv_b0 = b[0].inverse()
    c: list[CycNumber] = []
    for n in range(r + 1):
        acc = a[n]
        for k in range(1, n + 1):
            if k < len(b):
                acc = acc - b[k] * c[n - k]
        c.append(acc * inv_b0)
    return DerivativeValue(r, c[r] * math.factorial(r))
