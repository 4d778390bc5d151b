"""Picard groups of X and X', the maps between them, and Hecke characters.

In model mode Pic(X) = Z[O] + X(F_q) (a class is ``d[O] + (P - O)``), and
likewise for X'.  The cover X' -> X is the dual 2-isogeny, so

* pullback sends ``(d, P)`` to ``(2d, d T' + phi(P))`` where T' = (0, 0) on X',
* the norm sends ``(d, P')`` to ``(d, phi_dual(P'))``,
* sigma (translation by T') sends ``(d, P')`` to ``(d, P' + d T')``.

Finite parts are stored as coordinate tuples against fixed generators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING, Iterator

from .elliptic import EllipticCurve, isogeny_map
from .errors import InvariantError, UnsupportedError
from .exact_algebra import CycNumber, root_of_unity

if TYPE_CHECKING:
    from .curve_zeta import CoverData, CurveModel

Coord = tuple[int, ...]


@dataclass(frozen=True, order=True)
class LineBundleClass:
    """A class in Pic = Z (degree) + finite part (coordinates)."""

    degree: int
    pic0: Coord = ()

    def __str__(self) -> str:
        return f"({self.degree}, {list(self.pic0)})"


class PicGroup:
    """A finite abelian group of rational points with an invariant-factor basis."""

    def __init__(self, curve: EllipticCurve | None):
        self.curve = curve
        if curve is None:
            self.orders: tuple[int, ...] = ()
            self.gens: list = []
            self._coord = {None: ()}
            self._point = {(): None}
            return
        points = curve.points()
        total = len(points)
        orders = {P: curve.order_of(P) for P in points}
        big = max(points, key=lambda P: (orders[P], P is not None, P or (0, 0)))
        n2 = orders[big]
        n1 = total // n2
        if n1 == 1:
            gens, gorders = [big], (n2,)
        else:
            cyclic = {curve.mul(k, big) for k in range(n2)}
            for Q in points:
                if orders[Q] != n1:
                    continue
                if all(curve.mul(j, Q) not in cyclic for j in range(1, n1)):
                    gens, gorders = [Q, big], (n1, n2)
                    break
            else:
                raise InvariantError("pic-structure", "no complement to a maximal cyclic subgroup")
        self.gens = gens
        self.orders = gorders
        self._coord: dict = {}
        for coords in itertools.product(*(range(n) for n in gorders)):
            P = None
            for c, g in zip(coords, gens):
                P = curve.add(P, curve.mul(c, g))
            self._coord[P] = coords
        if len(self._coord) != total:
            raise InvariantError("pic-structure", "generators do not span the group")
        self._point = {c: P for P, c in self._coord.items()}

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def elements(self) -> list[Coord]:
        return list(itertools.product(*(range(n) for n in self.orders)))

    def coord(self, P) -> Coord:
        return self._coord[P]

    def point(self, c: Coord):
        return self._point[tuple(c)]

    def add(self, a: Coord, b: Coord) -> Coord:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def neg(self, a: Coord) -> Coord:
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def mul(self, k: int, a: Coord) -> Coord:
        return tuple((k * x) % n for x, n in zip(a, self.orders))

    @property
    def zero(self) -> Coord:
        return tuple(0 for _ in self.orders)

    def two_torsion(self) -> list[Coord]:
        return [c for c in self.elements() if self.mul(2, c) == self.zero]


# ----------------------------------------------------------------------------
# characters


def _mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


@dataclass(frozen=True)
class Character:
    """chi(d, c) = exp(2 pi i (a_0 d + sum a_j c_j)), exponents in Q/Z.

    ``exponents[0]`` is the value on the degree-one basepoint class; the rest
    pair with the finite-part generators.
    """

    exponents: tuple[Fraction, ...]
    tag: str | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(_mod1(Fraction(e)) for e in self.exponents))

    @property
    def order(self) -> int:
        return math.lcm(*(e.denominator for e in self.exponents))

    @property
    def degree_exponent(self) -> int:
        """chi(basepoint) = zeta_order ** degree_exponent."""
        return int(self.exponents[0] * self.order)

    def generator_exponents(self) -> tuple[int, ...]:
        N = self.order
        return tuple(int(e * N) for e in self.exponents[1:])

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def is_trivial_on_finite(self) -> bool:
        return not any(self.exponents[1:])

    def __mul__(self, other: Character) -> Character:
        if len(other.exponents) != len(self.exponents):
            raise ValueError("characters of different groups")
        return Character(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __pow__(self, k: int) -> Character:
        return Character(tuple(a * k for a in self.exponents))

    def phase(self, cls: LineBundleClass) -> Fraction:
        if len(cls.pic0) != len(self.exponents) - 1:
            raise ValueError(f"class {cls} does not match character of rank {len(self.exponents) - 1}")
        return _mod1(self.exponents[0] * cls.degree + sum(a * c for a, c in zip(self.exponents[1:], cls.pic0)))

    def describe(self) -> str:
        if self.is_trivial():
            return "trivial"
        return "chi[" + ",".join(str(e) for e in self.exponents) + "]"

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "degreeExponent": self.degree_exponent,
            "generatorExponents": list(self.generator_exponents()),
            "restriction": self.tag,
        }


def chi_value(chi: Character, cls: LineBundleClass, q: int | None = None) -> CycNumber:
    """The exact root of unity chi(cls)."""
    e = chi.phase(cls)
    N = chi.order
    return root_of_unity(N, int(e * N), q)


# ----------------------------------------------------------------------------
# the Picard model of the cover


class PicModel:
    def __init__(self, cover: CoverData):
        self.cover = cover
        self.q = cover.q
        if cover.mode == "model":
            self._init_model(cover.base, cover.cover)
        else:
            self._init_table()

    def _init_model(self, base: CurveModel, top: CurveModel) -> None:
        self.x_curve = base.curve()
        self.xp_curve = top.curve()
        self.X = PicGroup(self.x_curve)
        self.Xp = PicGroup(self.xp_curve)
        self.torsion_point = self.Xp.coord((0, 0))  # T', the kernel of the cover
        self._phi = {
            c: self.Xp.coord(isogeny_map(self.x_curve, self.xp_curve, self.X.point(c))) for c in self.X.elements()
        }
        self._phi_dual = {
            c: self.X.coord(isogeny_map(self.xp_curve, self.x_curve, self.Xp.point(c), dual=True))
            for c in self.Xp.elements()
        }

    def _init_table(self) -> None:
        self.x_curve = self.xp_curve = None
        self.X = PicGroup(None)
        self.Xp = PicGroup(None)
        self.torsion_point = ()
        self._phi = {(): ()}
        self._phi_dual = {(): ()}

    @property
    def mode(self) -> str:
        return self.cover.mode

    # ---- maps
    def pullback(self, c: LineBundleClass) -> LineBundleClass:
        base = self.Xp.mul(c.degree, self.torsion_point)
        return LineBundleClass(2 * c.degree, self.Xp.add(base, self._phi[c.pic0]))

    def norm(self, c: LineBundleClass) -> LineBundleClass:
        return LineBundleClass(c.degree, self._phi_dual[c.pic0])

    def sigma(self, c: LineBundleClass) -> LineBundleClass:
        return LineBundleClass(c.degree, self.Xp.add(c.pic0, self.Xp.mul(c.degree, self.torsion_point)))

    def add(self, a: LineBundleClass, b: LineBundleClass, on: str = "Xp") -> LineBundleClass:
        G = self.Xp if on == "Xp" else self.X
        return LineBundleClass(a.degree + b.degree, G.add(a.pic0, b.pic0))

    def neg(self, a: LineBundleClass, on: str = "Xp") -> LineBundleClass:
        G = self.Xp if on == "Xp" else self.X
        return LineBundleClass(-a.degree, G.neg(a.pic0))

    def x_generators(self) -> list[LineBundleClass]:
        """Degree-one basepoint and the finite generators of Pic(X)."""
        z = self.X.zero
        gens = [LineBundleClass(1, z)]
        for i in range(len(self.X.orders)):
            gens.append(LineBundleClass(0, tuple(1 if j == i else 0 for j in range(len(z)))))
        return gens

    def xp_generators(self) -> list[LineBundleClass]:
        z = self.Xp.zero
        gens = [LineBundleClass(1, z)]
        for i in range(len(self.Xp.orders)):
            gens.append(LineBundleClass(0, tuple(1 if j == i else 0 for j in range(len(z)))))
        return gens

    def xp_classes(self, degree: int) -> list[LineBundleClass]:
        return [LineBundleClass(degree, c) for c in self.Xp.elements()]

    def norm_index(self) -> int:
        """[Pic(X) : Nm Pic(X')], from the finite parts (degrees are all hit)."""
        if self.mode != "model":
            raise UnsupportedError("the norm index needs divisor classes (model mode)")
        image = {self._phi_dual[c] for c in self.Xp.elements()}
        return self.X.order // len(image)

    # ---- characters
    @cached_property
    def eta(self) -> Character:
        return eta_character(self)

    def trivial_x(self) -> Character:
        return Character((Fraction(0),) * (1 + len(self.X.orders)), tag="trivial")

    def trivial_xp(self) -> Character:
        return Character((Fraction(0),) * (1 + len(self.Xp.orders)), tag="trivial")


def pic_structure(cover: CoverData) -> PicModel:
    return PicModel(cover)


def eta_character(pic: PicModel) -> Character:
    """The quadratic character of Pic(X) whose kernel is the image of the norm."""
    if pic.mode != "model":
        raise UnsupportedError("eta as a character needs divisor classes (model mode)")
    image = {pic.norm(LineBundleClass(0, c)).pic0 for c in pic.Xp.elements()}
    # the basepoint O splits (its fibre is {O', T'}), so eta has degree exponent 0
    exps = [Fraction(0)]
    for i in range(len(pic.X.orders)):
        g = tuple(1 if j == i else 0 for j in range(len(pic.X.orders)))
        exps.append(Fraction(0) if g in image else Fraction(1, 2))
    eta = Character(tuple(exps), tag="eta")
    for c in pic.X.elements():
        inside = c in image
        if (eta.phase(LineBundleClass(0, c)) == 0) != inside:
            raise InvariantError("eta-kernel", "norm image is not the kernel of a character")
    return eta


def restriction_of(pic: PicModel, chi: Character) -> Character:
    """chi composed with pullback, as a character of Pic(X)."""
    exps = [chi.phase(pic.pullback(g)) for g in pic.x_generators()]
    return Character(tuple(exps))


def matches_restriction(pic: PicModel, chi: Character, restriction: str) -> bool:
    chi0 = restriction_of(pic, chi)
    if restriction == "trivial":
        return chi0.is_trivial()
    if restriction == "eta":
        if pic.mode != "model":
            return False
        return chi0 == pic.eta
    raise ValueError(f"unknown restriction tag {restriction!r}")


def _candidate_characters(orders: tuple[int, ...], max_order: int) -> Iterator[Character]:
    L = math.lcm(*range(1, max_order + 1))
    ranges = [[Fraction(k, L) for k in range(L)]]
    ranges += [[Fraction(k, n) for k in range(n)] for n in orders]
    for exps in itertools.product(*ranges):
        yield Character(exps)


def characters_of_base(pic: PicModel, max_order: int) -> list[Character]:
    """All characters of Pic(X) of order <= max_order, in a stable order."""
    out = [c for c in _candidate_characters(pic.X.orders, max_order) if c.order <= max_order]
    out.sort(key=lambda c: (c.order, c.exponents))
    return out


def enumerate_characters(pic: PicModel, restriction: str, max_order: int) -> list[Character]:
    """Characters of Pic(X') of order <= max_order restricting to 1 or eta.

    Sorted by order, then by exponents, so indices are stable.
    """
    if max_order < 1:
        raise ValueError("max_order must be positive")
    out = []
    for chi in _candidate_characters(pic.Xp.orders, max_order):
        if chi.order <= max_order and matches_restriction(pic, chi, restriction):
            out.append(Character(chi.exponents, tag=restriction))
    out.sort(key=lambda c: (c.order, c.exponents))
    return out


# ----------------------------------------------------------------------------
# closed points


def closed_point_classes(pic: PicModel, degree: int, on: str = "X") -> list[LineBundleClass]:
    """Classes ``[x]`` of the closed points of exact degree ``degree`` on X (or X' with ``on="Xp"``)."""
    if pic.mode != "model":
        raise UnsupportedError("closed points need an explicit model")
    model, group, curve = (
        (pic.cover.base, pic.X, pic.x_curve) if on == "X" else (pic.cover.cover, pic.Xp, pic.xp_curve)
    )
    Ed = model.curve(degree)
    F = Ed.F
    seen: set = set()
    out = []
    for P in Ed.points():
        if P is None or P in seen:
            continue
        orbit = [P]
        Q = Ed.frobenius(P)
        while Q != P:
            orbit.append(Q)
            Q = Ed.frobenius(Q)
        seen.update(orbit)
        if len(orbit) != degree:
            continue
        total = None
        for R in orbit:
            total = Ed.add(total, R)
        if total is not None:
            total = curve.F(F.to_int(total[0])), curve.F(F.to_int(total[1]))
        out.append(LineBundleClass(degree, group.coord(total)))
    if degree == 1:
        out.append(LineBundleClass(1, group.zero))  # the point at infinity
    return out


def splits_in_cover(pic: PicModel, degree: int, P) -> bool:
    """Whether the closed point through P in X(F_{q^degree}) has a preimage of the same degree.

    Decided by searching X'(F_{q^degree}) for a point mapping to P.
    """
    base, top = pic.cover.base, pic.cover.cover
    Ed, Epd = base.curve(degree), top.curve(degree)
    if P is None:
        return True
    return any(isogeny_map(Epd, Ed, R, dual=True) == P for R in Epd.points())
