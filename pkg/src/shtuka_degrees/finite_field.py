"""Small finite fields F_{p^k} via Zech logarithms.

Elements are integer codes: 0 is zero, ``i + 1`` is ``g^i`` for a fixed
primitive element g.  Intended for brute-force enumeration over fields of a
few thousand elements.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


class FiniteField:
    def __init__(self, p: int, k: int = 1):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.k = k
        self.size = p**k
        self._n = self.size - 1
        modulus = self._primitive_modulus()
        # exp table as digit vectors, digits low to high
        exp: list[tuple[int, ...]] = []
        cur = (1,) + (0,) * (k - 1)
        for _ in range(self._n):
            exp.append(cur)
            cur = self._times_x(cur, modulus)
        self._exp = exp
        self._log = {v: i for i, v in enumerate(exp)}
        # zech[i] = log(1 + g^i), or None when 1 + g^i = 0
        zech: list[int | None] = []
        for v in exp:
            w = ((v[0] + 1) % p,) + v[1:]
            zech.append(self._log.get(w))
        self._zech = zech
        self._half = self._n // 2 if p != 2 else 0  # log(-1)
        self._prime_codes = {c: self.from_digits((c,)) for c in range(p)}
        self._code_to_int = {v: c for c, v in self._prime_codes.items()}

    def _times_x(self, v: tuple[int, ...], modulus: tuple[int, ...]) -> tuple[int, ...]:
        p = self.p
        top = v[-1]
        shifted = (0,) + v[:-1]
        if top:
            shifted = tuple((s - top * modulus[i]) % p for i, s in enumerate(shifted))
        return shifted

    def _primitive_modulus(self) -> tuple[int, ...]:
        """Low coefficients of a monic degree-k polynomial with x primitive."""
        p, k = self.p, self.k
        if k == 1:
            for g in range(1, p):
                if len({pow(g, e, p) for e in range(p - 1)}) == p - 1:
                    return ((-g) % p,)
            raise AssertionError("no primitive root")
        for low in itertools.product(range(p), repeat=k):
            if low[0] == 0:
                continue
            cur = (1,) + (0,) * (k - 1)
            seen = set()
            ok = True
            for _ in range(self._n):
                if cur in seen:
                    ok = False
                    break
                seen.add(cur)
                cur = self._times_x(cur, low)
            if ok and cur == (1,) + (0,) * (k - 1) and len(seen) == self._n:
                return low
        raise AssertionError("no primitive polynomial found")

    # ---- conversions
    def from_digits(self, digits: tuple[int, ...]) -> int:
        v = tuple(d % self.p for d in digits) + (0,) * (self.k - len(digits))
        if not any(v):
            return 0
        if self.k == 1:
            v = v[:1]
        return self._log[v] + 1

    def __call__(self, c: int) -> int:
        """Image of the integer c."""
        return self._prime_codes[c % self.p]

    def to_int(self, a: int) -> int:
        """Inverse of ``__call__`` for elements of the prime field."""
        return self._code_to_int[a]

    def in_prime_field(self, a: int) -> bool:
        return a in self._code_to_int

    def elements(self) -> range:
        return range(self.size)

    # ---- arithmetic
    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        i, j = a - 1, b - 1
        z = self._zech[(j - i) % self._n]
        if z is None:
            return 0
        return (i + z) % self._n + 1

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        return (a - 1 + self._half) % self._n + 1

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return (a + b - 2) % self._n + 1

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return (-(a - 1)) % self._n + 1

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1 if e == 0 else self.inv(0)
        return ((a - 1) * e) % self._n + 1

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.power(a, self.p**times)

    def is_square(self, a: int) -> bool:
        return a == 0 or (a - 1) % 2 == 0

    def sqrt(self, a: int) -> int:
        if a == 0:
            return 0
        if (a - 1) % 2:
            raise ValueError("not a square")
        return (a - 1) // 2 + 1

    def quadratic_character(self, a: int) -> int:
        if a == 0:
            return 0
        return 1 if (a - 1) % 2 == 0 else -1


@lru_cache(maxsize=None)
def field(p: int, k: int = 1) -> FiniteField:
    return FiniteField(p, k)
