"""Line-bundle classes on X', hermitian block data, and the complement census.

Bundles are direct sums of line-bundle classes.  Self-duality is decided on
classes: a hermitian isomorphism E -> sigma^* E^dual is assumed to exist
whenever the classes agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from .curve_zeta import CoverData
from .errors import UnsupportedError
from .picard import LineBundleClass

BlockTag = Literal["zero", "iso", "other"]
_TAGS = ("zero", "iso", "other")


def d_invariant(E: Iterable[LineBundleClass] | LineBundleClass, cover: CoverData) -> int:
    """rank(E) deg(omega_X) - deg(E)."""
    if isinstance(E, LineBundleClass):
        E = [E]
    E = list(E)
    return len(E) * cover.deg_omega - sum(c.degree for c in E)


def sigma_serre_dual(E: LineBundleClass, cover: CoverData) -> LineBundleClass:
    """The class of sigma^* Hom(E, omega_{X'})."""
    pic = cover.pic
    if cover.mode != "model":
        # degree-only model: omega_{X'} has degree 2g' - 2 and sigma^* fixes degrees
        return LineBundleClass(2 * cover.genus_xprime - 2 - E.degree, ())
    # omega_{X'} is trivial on an elliptic curve
    return pic.sigma(pic.neg(E))


def is_selfdual(E: LineBundleClass, cover: CoverData) -> bool:
    if E.degree != cover.genus_xprime - 1:
        return False
    return sigma_serre_dual(E, cover) == E


def selfdual_classes(cover: CoverData) -> list[LineBundleClass]:
    """All self-dual classes (model mode: the 2-torsion of Pic^0(X'))."""
    return [c for c in cover.pic.xp_classes(cover.genus_xprime - 1) if is_selfdual(c, cover)]


@dataclass(frozen=True)
class HermitianPair:
    """E = E1 + E2 with block-diagonal hermitian data (a1, a2)."""

    E1: LineBundleClass
    E2: LineBundleClass
    a1: BlockTag = "zero"
    a2: BlockTag = "iso"

    def __post_init__(self):
        if self.a1 not in _TAGS or self.a2 not in _TAGS:
            raise ValueError(f"block tags must be one of {_TAGS}")

    def validate(self, cover: CoverData) -> None:
        if self.a2 == "iso" and not is_selfdual(self.E2, cover):
            raise ValueError(f"a2 = iso needs a self-dual E2, got {self.E2}")
        if self.a1 == "iso" and not is_selfdual(self.E1, cover):
            raise ValueError(f"a1 = iso needs a self-dual E1, got {self.E1}")

    @property
    def classes(self) -> tuple[LineBundleClass, LineBundleClass]:
        return (self.E1, self.E2)


@dataclass(frozen=True)
class Census:
    """The hermitian maps a = (a1 b; b' a2) with fixed diagonal blocks.

    ``h`` is dim Hom(E2, sigma^* E1^dual); the off-diagonal block ranges over
    q^h sections.  Only the b = 0 term is evaluated here.
    """

    h: int
    q: int
    hom_class: LineBundleClass

    @property
    def term_count(self) -> int:
        return self.q**self.h

    @property
    def resolved(self) -> bool:
        return self.h == 0


def _h0_genus_one(c: LineBundleClass) -> int:
    if c.degree >= 1:
        return c.degree
    if c.degree == 0:
        return 1 if not any(c.pic0) else 0
    return 0


def complement_census(E1: LineBundleClass, a1tag: BlockTag, E2: LineBundleClass, cover: CoverData) -> Census:
    """Riemann-Roch count of the off-diagonal blocks for E2 self-dual."""
    if a1tag not in _TAGS:
        raise ValueError(f"unknown block tag {a1tag!r}")
    if not is_selfdual(E2, cover):
        raise ValueError(f"E2 = {E2} is not self-dual")
    if cover.mode != "model":
        raise UnsupportedError("the complement census needs Riemann-Roch data (model mode)")
    pic = cover.pic
    hom = pic.add(pic.neg(E2), sigma_serre_dual(E1, cover))
    return Census(_h0_genus_one(hom), cover.q, hom)
