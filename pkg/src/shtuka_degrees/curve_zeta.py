"""Curves, point counts, zeta numerators, the double cover and its L-functions.

Two ingestion modes are supported: explicit elliptic models
``y^2 = x^3 + A x^2 + B x`` over a prime field, whose cover is the 2-isogeny
dual to the Velu isogeny with kernel ``(0, 0)``; and tables of point counts for
X and X' (any genus), which carry no divisor-class data.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import TYPE_CHECKING, Union

from .elliptic import EllipticCurve, two_isogenous
from .errors import InvariantError, SpecParseError, UnsupportedError
from .exact_algebra import ExpFraction, ExpPoly, root_of_unity, shift_argument
from .finite_field import _is_prime

if TYPE_CHECKING:
    from .picard import Character, PicModel

# ----------------------------------------------------------------------------
# curve descriptions


@dataclass(frozen=True)
class CurveModel:
    """y^2 = x^3 + A x^2 + B x over F_q, q an odd prime."""

    q: int
    A: int
    B: int
    label: str = ""
    genus: int = 1

    def __post_init__(self):
        if self.q % 2 == 0 or not _is_prime(self.q):
            raise ValueError(f"model mode needs an odd prime q, got {self.q}")
        A, B = self.A % self.q, self.B % self.q
        if (B * B * (A * A - 4 * B)) % self.q == 0:
            raise ValueError("singular model: B^2 (A^2 - 4B) vanishes mod q")

    def curve(self, d: int = 1) -> EllipticCurve:
        return EllipticCurve.over(self.q, self.A, self.B, d)


@dataclass(frozen=True)
class CountTable:
    """Point counts #X(F_{q^d}) and #X'(F_{q^d}) for d = 1, 2, ..."""

    q: int
    genus: int
    counts_x: tuple[int, ...]
    counts_xprime: tuple[int, ...]
    label: str = ""

    @property
    def genus_xprime(self) -> int:
        # Riemann-Hurwitz for an unramified double cover
        return 2 * self.genus - 1


Curve = Union[CurveModel, CountTable]


# ----------------------------------------------------------------------------
# point counts and zeta numerators


def count_points(model: CurveModel, d: int) -> int:
    """#X(F_{q^d}), by enumeration for d = 1 and the trace recurrence beyond.

    For d = 2 the recurrence value is also checked against enumeration over F_{q^2}.
    """
    if d < 1:
        raise ValueError("extension degree must be positive")
    q = model.q
    n1 = model.curve(1).count()
    if d == 1:
        return n1
    a = q + 1 - n1
    s_prev, s_cur = 2, a
    for _ in range(d - 1):
        s_prev, s_cur = s_cur, a * s_cur - q * s_prev
    nd = q**d + 1 - s_cur
    if d == 2:
        brute = model.curve(2).count()
        if brute != nd:
            raise InvariantError("count-recurrence", f"recurrence {nd} != enumeration {brute}")
    return nd


def _newton_coefficients(counts: list[int], q: int) -> list[Fraction]:
    """Coefficients of exp(sum_d (N_d - q^d - 1) t^d / d) through t^len(counts)."""
    power_sums = [q ** (d + 1) + 1 - n for d, n in enumerate(counts)]
    c = [Fraction(1)]
    for k in range(1, len(counts) + 1):
        c.append(-sum(power_sums[i - 1] * c[k - i] for i in range(1, k + 1)) / k)
    return c


def zeta_numerator(counts, g: int, q: int) -> ExpPoly:
    """The numerator P(t) of the zeta function from N_1, ..., N_m (m >= g).

    The first g coefficients come from the counts and the rest from
    P(t) = q^g t^{2g} P(1/(qt)); any additional counts must agree.
    """
    counts = list(counts)
    if len(counts) < g:
        raise ValueError(f"need at least {g} point counts, got {len(counts)}")
    newton = _newton_coefficients(counts, q)
    if any(c.denominator != 1 for c in newton):
        raise InvariantError("zeta-functional-equation", "non-integral zeta coefficients")
    coeffs = [Fraction(0)] * (2 * g + 1)
    for i in range(g + 1):
        coeffs[i] = newton[i]
        coeffs[2 * g - i] = newton[i] * q ** (g - i)
    for k in range(g + 1, len(newton)):
        expected = coeffs[k] if k <= 2 * g else 0
        if newton[k] != expected:
            raise InvariantError(
                "zeta-functional-equation",
                f"count N_{k} disagrees with P(t) = q^g t^2g P(1/qt) (coefficient {newton[k]} vs {expected})",
            )
    return ExpPoly.from_coefficients(coeffs, q)


def zeta_functional_equation_holds(P: ExpPoly, g: int) -> bool:
    q = P.q
    rhs = P.substitute(Fraction(1, q)).reflect() * ExpPoly.monomial(2 * g, q, q**g)
    return rhs == P


def weil_bounds_hold(counts, g: int, q: int) -> bool:
    return all((n - q**d - 1) ** 2 <= 4 * g * g * q**d for d, n in enumerate(counts, start=1))


# ----------------------------------------------------------------------------
# the cover


@dataclass(frozen=True)
class CoverData:
    base: Curve
    cover: Curve
    zeta_x: ExpPoly
    zeta_xprime: ExpPoly
    eta_l: ExpPoly
    genus: int

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def deg_omega(self) -> int:
        return 2 * self.genus - 2

    @property
    def genus_xprime(self) -> int:
        return 2 * self.genus - 1

    @property
    def mode(self) -> str:
        return "model" if isinstance(self.base, CurveModel) else "table"

    @property
    def label(self) -> str:
        return self.base.label

    @cached_property
    def memo(self) -> dict:
        """Per-cover cache for L-products (CoverData itself is immutable)."""
        return {}

    @cached_property
    def pic(self) -> PicModel:
        from .picard import pic_structure

        return pic_structure(self)


def _eta_quotient(zeta_x: ExpPoly, zeta_xprime: ExpPoly, g: int) -> ExpPoly:
    try:
        eta_l = zeta_xprime.divide_exact(zeta_x)
    except ArithmeticError:
        raise InvariantError("zeta-cover-divisibility", "P_X does not divide P_X'") from None
    if eta_l.min_degree != 0 or eta_l.max_degree != 2 * g - 2:
        raise InvariantError("zeta-cover-divisibility", f"L(s, eta) has wrong degree: {eta_l}")
    return eta_l


def build_cover(curve: Curve) -> CoverData:
    """Construct X' -> X and the L-function L(s, eta) = P_X'/P_X."""
    if isinstance(curve, CurveModel):
        A2, B2 = two_isogenous(curve.A, curve.B)
        cover = CurveModel(curve.q, A2 % curve.q, B2 % curve.q, label=f"{curve.label} (2-isogenous)")
        zx = zeta_numerator([count_points(curve, 1)], 1, curve.q)
        zxp = zeta_numerator([count_points(cover, 1)], 1, curve.q)
        return CoverData(curve, cover, zx, zxp, _eta_quotient(zx, zxp, 1), 1)
    if isinstance(curve, CountTable):
        g, q = curve.genus, curve.q
        if not (weil_bounds_hold(curve.counts_x, g, q) and weil_bounds_hold(curve.counts_xprime, 2 * g - 1, q)):
            raise InvariantError("weil-bounds", "point counts violate the Weil bounds")
        zx = zeta_numerator(curve.counts_x, g, q)
        zxp = zeta_numerator(curve.counts_xprime[: 2 * g - 1], 2 * g - 1, q)
        eta_l = _eta_quotient(zx, zxp, g)
        # remaining X' counts are checked only after divisibility
        try:
            zeta_numerator(curve.counts_xprime, 2 * g - 1, q)
        except InvariantError as exc:
            raise InvariantError("zeta-functional-equation-cover", str(exc)) from None
        return CoverData(curve, curve, zx, zxp, eta_l, g)
    raise TypeError(f"unsupported curve description {curve!r}")


# ----------------------------------------------------------------------------
# L-functions

ChiTag = Union[str, "Character"]


@dataclass(frozen=True)
class LSeries:
    tag: str
    value: ExpPoly | ExpFraction = dc_field(compare=False)


def _trivial_zeta(cover: CoverData, omega=None) -> ExpFraction:
    q = cover.q
    P = cover.zeta_x
    t = ExpPoly.monomial(1, q)
    if omega is not None:
        P = P.substitute(omega)
        t = t.scale(omega)
    return ExpFraction(P, (1 - t) * (1 - t.scale(q)))


def char_lfunction(cover: CoverData, chi0: ChiTag) -> LSeries:
    """L(s, chi0) for a character of Pic(X), as a polynomial or fraction in t."""
    if chi0 == "trivial":
        return LSeries("trivial", _trivial_zeta(cover))
    if chi0 == "eta":
        return LSeries("eta", cover.eta_l)
    if isinstance(chi0, str):
        raise ValueError(f"unknown character tag {chi0!r}")
    if chi0.is_trivial():
        return LSeries("trivial", _trivial_zeta(cover))
    if cover.mode != "model":
        raise UnsupportedError("table mode supports only the trivial character and eta")
    if chi0.is_trivial_on_finite():
        omega = root_of_unity(chi0.order, chi0.degree_exponent, cover.q)
        return LSeries(chi0.describe(), _trivial_zeta(cover, omega))
    # nontrivial on Pic^0: a polynomial of degree 2g - 2 = 0 in genus one
    return LSeries(chi0.describe(), ExpPoly.constant(1, cover.q))


def normalize_chi0(cover: CoverData, chi0: ChiTag) -> ChiTag:
    """Replace characters equal to 1 or eta by their string tags."""
    if isinstance(chi0, str):
        if chi0 not in ("trivial", "eta"):
            raise ValueError(f"unknown character tag {chi0!r}")
        return chi0
    if chi0.is_trivial():
        return "trivial"
    if cover.mode == "model" and chi0 == cover.pic.eta:
        return "eta"
    return chi0


def eta_twist(cover: CoverData, chi0: ChiTag, k: int) -> ChiTag:
    """eta^k * chi0."""
    chi0 = normalize_chi0(cover, chi0)
    if k % 2 == 0:
        return chi0
    if chi0 == "trivial":
        return "eta"
    if chi0 == "eta":
        return "trivial"
    return chi0 * cover.pic.eta


def script_L(cover: CoverData, n: int, chi0: ChiTag) -> ExpFraction:
    """prod_{i=1}^n L(2s + i, eta^{i-n} chi0)."""
    if n < 1:
        raise ValueError("n must be positive")
    chi0 = normalize_chi0(cover, chi0)
    key = ("script_L", n, chi0)
    if key not in cover.memo:
        cover.memo[key] = _script_L(cover, n, chi0)
    return cover.memo[key]


def _script_L(cover: CoverData, n: int, chi0: ChiTag) -> ExpFraction:
    q = cover.q
    total = ExpFraction(ExpPoly.constant(1, q), ExpPoly.constant(1, q))
    for i in range(1, n + 1):
        L = char_lfunction(cover, eta_twist(cover, chi0, i - n)).value
        # L(2s + i): T = q^{-i} t^2
        total = total * L.substitute(Fraction(1, q**i), 2)
    return total


def l_functional_equation_holds(
    cover: CoverData, L: ExpPoly | ExpFraction, dual: ExpPoly | ExpFraction | None = None
) -> bool:
    """q^{(s/2) deg w} L(s, chi) == q^{((1-s)/2) deg w} L(1-s, chi^{-1}), exactly.

    ``dual`` is L(s, chi^{-1}); it defaults to ``L``, which is right for real chi.
    """
    q, half = cover.q, cover.deg_omega // 2
    dual = L if dual is None else dual
    lhs = L * ExpPoly.monomial(-half, q)
    rhs = shift_argument(dual.reflect(), -1) * ExpPoly.monomial(half, q, q**half)
    return lhs == rhs


# ----------------------------------------------------------------------------
# spec files

_LIST_RE = re.compile(r"^\[\s*(-?\d+(\s*,\s*-?\d+)*)?\s*\]$")


def _parse_int(key: str, raw: str) -> int:
    if not re.fullmatch(r"-?\d+", raw.strip()):
        raise SpecParseError(f"{key}: expected an exact integer, got {raw!r}")
    return int(raw)


def _parse_list(key: str, raw: str) -> tuple[int, ...]:
    raw = raw.strip()
    if not _LIST_RE.match(raw):
        raise SpecParseError(f"{key}: expected a list of integers like [1,2,3], got {raw!r}")
    inner = raw[1:-1].strip()
    return tuple(int(v) for v in inner.split(",")) if inner else ()


def parse_curve_spec(text: str) -> Curve:
    """Parse the line-oriented ``key=value`` curve description."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecParseError(f"line {lineno}: expected key=value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key in values:
            raise SpecParseError(f"line {lineno}: duplicate key {key!r}")
        values[key] = raw
    mode = values.pop("mode", "model")
    label = values.pop("label", "")
    if "q" not in values:
        raise SpecParseError("missing key q")
    q = _parse_int("q", values.pop("q"))
    try:
        if mode == "model":
            missing = {"A", "B"} - values.keys()
            if missing:
                raise SpecParseError(f"missing keys {sorted(missing)}")
            curve: Curve = CurveModel(q, _parse_int("A", values.pop("A")), _parse_int("B", values.pop("B")), label)
        elif mode == "table":
            missing = {"genus", "countsX", "countsXprime"} - values.keys()
            if missing:
                raise SpecParseError(f"missing keys {sorted(missing)}")
            g = _parse_int("genus", values.pop("genus"))
            cx = _parse_list("countsX", values.pop("countsX"))
            cxp = _parse_list("countsXprime", values.pop("countsXprime"))
            if g < 1 or q < 3 or q % 2 == 0:
                raise SpecParseError("table mode needs genus >= 1 and odd q")
            if len(cx) < g or len(cxp) < 2 * g - 1:
                raise SpecParseError(f"need at least {g} counts for X and {2 * g - 1} for X'")
            curve = CountTable(q, g, cx, cxp, label)
        else:
            raise SpecParseError(f"unknown mode {mode!r}")
    except ValueError as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError(str(exc)) from None
    if values:
        raise SpecParseError(f"unknown keys {sorted(values)}")
    return curve


def load_curve_spec(path: str | Path) -> Curve:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_curve_spec(text)


def lcm_orders(*orders: int) -> int:
    return math.lcm(*orders) if orders else 1
