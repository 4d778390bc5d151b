"""Normalized Fourier coefficients of the spherical Siegel Eisenstein series.

Only the coefficients with an explicit closed form are computed: hermitian
isomorphisms, and the rank-two degenerate pairs ``diag(0, a2)`` with ``a2``
an isomorphism.  Everything else goes through a density plugin.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .bundles import BlockTag, Census, complement_census, d_invariant, is_selfdual, sigma_serre_dual
from .curve_zeta import CoverData, normalize_chi0, script_L
from .errors import InvariantError, UnresolvedCensusError
from .exact_algebra import CycNumber, ExpFraction, ExpPoly, shift_argument
from .picard import Character, LineBundleClass, chi_value, restriction_of


def chi_of(chi: Character, classes: Sequence[LineBundleClass] | LineBundleClass, cover: CoverData) -> CycNumber:
    """chi(det E) for E a direct sum of line-bundle classes."""
    if isinstance(classes, LineBundleClass):
        classes = [classes]
    pic = cover.pic
    det = LineBundleClass(0, pic.Xp.zero)
    for c in classes:
        det = pic.add(det, c)
    return chi_value(chi, det, cover.q)


def restriction_tag(chi: Character, cover: CoverData):
    return normalize_chi0(cover, restriction_of(cover.pic, chi))


def _renormalizer(cover: CoverData, n: int, chi0) -> ExpFraction:
    """q^{n s deg w} L_n(s, chi0)."""
    return script_L(cover, n, chi0) * ExpPoly.monomial(-n * cover.deg_omega, cover.q)


def _jointly_selfdual(classes: Sequence[LineBundleClass], cover: CoverData) -> bool:
    duals = Counter(sigma_serre_dual(c, cover) for c in classes)
    return duals == Counter(classes)


def iso_coefficient(
    classes: Sequence[LineBundleClass], chi: Character, cover: CoverData, normalized: bool = True
) -> ExpPoly | ExpFraction:
    """Coefficient at a hermitian isomorphism a: E -> sigma^* E^dual.

    The normalized coefficient is the constant chi(det E).
    """
    classes = list(classes)
    if not _jointly_selfdual(classes, cover):
        raise ValueError("E is not isomorphic to its sigma-twisted Serre dual")
    value = ExpPoly.constant(chi_of(chi, classes, cover), cover.q)
    if normalized:
        return value
    return value / _renormalizer(cover, len(classes), restriction_tag(chi, cover))


def intertwining_constant(cover: CoverData, n: int, chi0) -> ExpFraction:
    """c_M(s) = q^{-2 n s deg w} L_n(-s, chi0) / L_n(s, chi0)."""
    Ln = script_L(cover, n, chi0)
    return Ln.reflect() / Ln * ExpPoly.monomial(2 * n * cover.deg_omega, cover.q)


def _check_reflect_invariant(f, what: str) -> None:
    if f.reflect() != f:
        raise InvariantError("coefficient-functional-equation", f"{what} is not invariant under s -> -s")


def _genus_drop_ratio(cover: CoverData, chi0) -> ExpPoly | ExpFraction:
    """q^{2s w} L_2(s, chi0) / (q^{(s+1/2) w} L_1(s + 1/2, chi0)), simplified once per cover."""
    key = ("genus_drop_ratio", chi0)
    if key not in cover.memo:
        q, w = cover.q, cover.deg_omega
        L2 = script_L(cover, 2, chi0)
        L1_half = shift_argument(script_L(cover, 1, chi0), Fraction(1, 2))
        # q^{(s+1/2) w} = q^{w/2} t^{-w}; w is even
        denom = L1_half * ExpPoly.monomial(-w, q, Fraction(q) ** (w // 2))
        cover.memo[key] = (L2 * ExpPoly.monomial(-2 * w, q) / denom).simplify()
    return cover.memo[key]


def degenerate_rank2_coefficient(
    E1: LineBundleClass, E2: LineBundleClass, chi: Character, cover: CoverData
) -> ExpPoly | ExpFraction:
    """Normalized coefficient at diag(0, a2), assembled from rank-one data.

    Uses the shifted ratio q^{2s deg w} L_2(s, chi0) / (q^{(s+1/2) deg w} L_1(s + 1/2, chi0))
    and symmetrizes under s -> -s.  Returns an ExpPoly when the result is one.
    """
    if not is_selfdual(E2, cover):
        raise ValueError(f"E2 = {E2} is not self-dual")
    kernel = _degenerate_kernel(cover, restriction_tag(chi, cover), E1.degree)
    return kernel * (chi_of(chi, E1, cover) * chi_of(chi, E2, cover))


def _degenerate_kernel(cover: CoverData, chi0, degree: int) -> ExpPoly | ExpFraction:
    """The symmetrized bracket of the degenerate coefficient, before the chi factors.

    It depends on E1 only through its degree; memoized per cover.
    """
    key = ("degenerate_kernel", chi0, degree)
    if key not in cover.memo:
        q = cover.q
        term = _genus_drop_ratio(cover, chi0) * ExpPoly.monomial(-degree, q, Fraction(q) ** degree)
        total = term + term.reflect()
        if isinstance(total, ExpFraction):
            total = total.simplify()
        _check_reflect_invariant(total, "degenerate coefficient")
        cover.memo[key] = total
    return cover.memo[key]


def degenerate_rank2_closed_form(
    E1: LineBundleClass, E2: LineBundleClass, chi: Character, cover: CoverData
) -> ExpPoly:
    """chi(E1) chi(E2) q^{-d} (t^{-d} L(2s, eta) + t^{d} L(-2s, eta)), d = d(E1)."""
    if not is_selfdual(E2, cover):
        raise ValueError(f"E2 = {E2} is not self-dual")
    if restriction_tag(chi, cover) != "trivial":
        raise ValueError("the closed form needs a character with trivial restriction")
    q = cover.q
    d = d_invariant(E1, cover)
    L2s = cover.eta_l.substitute(1, 2)
    sym = ExpPoly.monomial(-d, q) * L2s
    sym = sym + sym.reflect()
    scale = chi_of(chi, E1, cover) * chi_of(chi, E2, cover) * (Fraction(q) ** (-d))
    return sym.scale(scale)


@dataclass(frozen=True)
class CokernelDescriptor:
    """One term of the doubling sum that needs a representation density."""

    E1: LineBundleClass
    E2: LineBundleClass
    a1: BlockTag
    section_index: int  # 0 is the zero off-diagonal block
    h: int


DensityPlugin = Callable[[CokernelDescriptor, int], ExpPoly]


def doubling_coefficient(
    E1: LineBundleClass,
    a1tag: BlockTag,
    E2: LineBundleClass,
    chi: Character,
    cover: CoverData,
    density_plugin: Optional[DensityPlugin] = None,
) -> ExpPoly | ExpFraction:
    """Sum of normalized coefficients over the hermitian maps with diagonal (a1, a2).

    The zero off-diagonal term is computed in closed form when a1 is zero or an
    isomorphism; all other terms are delegated to ``density_plugin``, called as
    ``plugin(descriptor, q)``.
    """
    census: Census = complement_census(E1, a1tag, E2, cover)
    pending: list[CokernelDescriptor] = []
    if a1tag == "zero":
        total = degenerate_rank2_coefficient(E1, E2, chi, cover)
    elif a1tag == "iso":
        total = iso_coefficient([E1, E2], chi, cover)
    else:
        total = ExpPoly({}, cover.q)
        pending.append(CokernelDescriptor(E1, E2, a1tag, 0, census.h))
    pending.extend(CokernelDescriptor(E1, E2, a1tag, i, census.h) for i in range(1, census.term_count))
    if pending and density_plugin is None:
        raise UnresolvedCensusError(
            census.term_count,
            len(pending),
            f"Hom(E2, sigma^* E1^dual) has dimension {census.h} over F_{cover.q}",
        )
    for desc in pending:
        total = total + density_plugin(desc, cover.q)
    return total.simplify() if isinstance(total, ExpFraction) else total


def zero_density_plugin(desc: CokernelDescriptor, q: int) -> ExpPoly:
    """Stub plugin: every density term contributes zero."""
    return ExpPoly({}, q)
