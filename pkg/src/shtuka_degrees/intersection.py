"""Predicted degrees of special cycles and the right-hand sides they are compared with.

Every degree is an exact rational: q-power prefactors are kept as Fractions
and the character values cancel, which ``as_rational`` certifies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .bundles import BlockTag, HermitianPair, d_invariant, is_selfdual
from .curve_zeta import CoverData, script_L
from .errors import InvariantError, SpecParseError, UnsupportedError
from .exact_algebra import CycNumber, DerivativeValue, ExpFraction, ExpPoly, as_rational, central_derivative, shift_argument
from .eisenstein import (
    DensityPlugin,
    chi_of,
    degenerate_rank2_coefficient,
    doubling_coefficient,
    iso_coefficient,
)
from .picard import Character, LineBundleClass


@dataclass(frozen=True)
class DegreeResult:
    value: Fraction
    r: int
    provenance: str
    inputs: dict = dc_field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {"formulaPath": self.provenance, "value": str(self.value), "r": self.r, "inputs": self.inputs}


@dataclass(frozen=True)
class BCLInput:
    """A base-change L-polynomial in t and the cusp-form coefficient f."""

    lpoly: ExpPoly
    f: CycNumber

    @classmethod
    def from_json(cls, data: dict, q: int) -> BCLInput:
        try:
            lpoly = ExpPoly.from_pairs(data["lpoly"], q)
            f = CycNumber.from_json(data.get("f", "1"), q)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecParseError(f"malformed L-polynomial input: {exc}") from None
        return cls(lpoly, f)

    @classmethod
    def load(cls, path: str | Path, q: int) -> BCLInput:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise SpecParseError(f"cannot read {path}: {exc.strerror or exc}") from None
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"{path}: invalid JSON ({exc.msg})") from None
        if not isinstance(data, dict):
            raise SpecParseError(f"{path}: expected a JSON object")
        return cls.from_json(data, q)


def _require_even(r: int) -> None:
    if r < 0 or r % 2:
        raise ValueError(f"derivative order must be even and nonnegative, got {r}")


def _qpow(q: int, e: int) -> Fraction:
    return Fraction(q) ** e


# ----------------------------------------------------------------------------
# arithmetic Siegel-Weil side

Pair = Union[HermitianPair, LineBundleClass]


def _asw_coefficient(pair: Pair, chi: Character, cover: CoverData):
    if isinstance(pair, LineBundleClass):
        return [pair], iso_coefficient([pair], chi, cover)
    pair.validate(cover)
    if pair.a2 != "iso":
        raise UnsupportedError("only pairs with a2 an isomorphism have a closed-form coefficient")
    if pair.a1 == "iso":
        return list(pair.classes), iso_coefficient(list(pair.classes), chi, cover)
    if pair.a1 == "zero":
        return list(pair.classes), degenerate_rank2_coefficient(pair.E1, pair.E2, chi, cover)
    raise UnsupportedError("a1 with a nonzero cokernel needs representation densities")


def asw_derivative(pair: Pair, chi: Character, cover: CoverData, r: int) -> DerivativeValue:
    """(q^{(n/2) d(E)} / chi(det E)) times the r-th central derivative of the coefficient."""
    classes, coeff = _asw_coefficient(pair, chi, cover)
    n = len(classes)
    dE = d_invariant(classes, cover)
    if (n * dE) % 2:
        raise UnsupportedError("odd n d(E) would need a half-integral power of q")
    prefactor = _qpow(cover.q, n * dE // 2)
    value = central_derivative(coeff, r).value * prefactor / chi_of(chi, classes, cover)
    return DerivativeValue(r, value)


def asw_degree(pair: Pair, chi: Character, cover: CoverData, r: int) -> DegreeResult:
    _require_even(r)
    dv = asw_derivative(pair, chi, cover, r)
    inputs = {"pair": _describe_pair(pair), "chi": chi.describe()}
    return DegreeResult(dv.as_rational(), r, "asw", inputs)


def _describe_pair(pair: Pair) -> dict:
    if isinstance(pair, LineBundleClass):
        return {"E": str(pair), "a": "iso"}
    return {"E1": str(pair.E1), "E2": str(pair.E2), "a1": pair.a1, "a2": pair.a2}


def u1_cycle_integrand(E1: LineBundleClass, cover: CoverData) -> ExpPoly:
    """q^{d(E1) s} L(2s, eta)."""
    d = d_invariant(E1, cover)
    return ExpPoly.monomial(-d, cover.q) * cover.eta_l.substitute(1, 2)


def u1_cycle_degree(E1: LineBundleClass, E2: LineBundleClass, cover: CoverData, r: int) -> DegreeResult:
    """Degree of the special cycle at diag(0, a2): twice the r-th derivative of q^{d s} L(2s, eta)."""
    _require_even(r)
    if not is_selfdual(E2, cover):
        raise ValueError(f"E2 = {E2} is not self-dual")
    value = 2 * central_derivative(u1_cycle_integrand(E1, cover), r).value
    inputs = {"E1": str(E1), "E2": str(E2), "d(E1)": d_invariant(E1, cover)}
    return DegreeResult(as_rational(value), r, "u1-cycle", inputs)


@dataclass(frozen=True)
class ConsistencyReport:
    r: int
    asw: Fraction
    u1_cycle: Fraction

    @property
    def agree(self) -> bool:
        return self.asw == self.u1_cycle


def degree_consistency(
    E1: LineBundleClass, E2: LineBundleClass, chi: Character, cover: CoverData, r: int
) -> ConsistencyReport:
    """Compare the two routes to the degree at diag(0, a2); raises on mismatch.

    For odd r both sides are derivatives of s -> -s symmetric functions and vanish.
    """
    pair = HermitianPair(E1, E2, "zero", "iso")
    if r % 2:
        asw = asw_derivative(pair, chi, cover, r).as_rational()
        g = u1_cycle_integrand(E1, cover)
        other = as_rational(central_derivative(g + g.reflect(), r).value)
    else:
        asw = asw_degree(pair, chi, cover, r).value
        other = u1_cycle_degree(E1, E2, cover, r).value
    report = ConsistencyReport(r, asw, other)
    if not report.agree:
        raise InvariantError("degree-consistency", f"asw {asw} != u1-cycle {other} at r={r}")
    return report


# ----------------------------------------------------------------------------
# the doubling side


def z2_intersection_degree(
    E1: LineBundleClass,
    a1tag: BlockTag,
    E2: LineBundleClass,
    chi: Character,
    cover: CoverData,
    r: int,
    density_plugin: Optional[DensityPlugin] = None,
) -> DegreeResult:
    _require_even(r)
    coeff = doubling_coefficient(E1, a1tag, E2, chi, cover, density_plugin)
    m = 1
    prefactor = _qpow(cover.q, m * d_invariant(E1, cover) + m * d_invariant(E2, cover))
    chis = chi_of(chi, E1, cover) * chi_of(chi, E2, cover)
    value = central_derivative(coeff, r).value * prefactor / chis
    inputs = {"E1": str(E1), "a1": a1tag, "E2": str(E2), "chi": chi.describe()}
    return DegreeResult(as_rational(value), r, "doubling", inputs)


def dkernel_coefficient(
    E1: LineBundleClass,
    a1tag: BlockTag,
    E2: LineBundleClass,
    chi: Character,
    cover: CoverData,
    r: int,
    density_plugin: Optional[DensityPlugin] = None,
) -> CycNumber:
    """chi(E1) q^{-d(E1)} times the intersection degree."""
    deg = z2_intersection_degree(E1, a1tag, E2, chi, cover, r, density_plugin)
    return chi_of(chi, E1, cover) * (_qpow(cover.q, -d_invariant(E1, cover)) * deg.value)


def duplication_scalar(bc: BCLInput, cover: CoverData, n: int, chi0="trivial") -> ExpFraction:
    """L(s + 1/2, BC(pi) x chi) / L_n(s, chi0), for chi0 trivial."""
    if chi0 != "trivial" and not (hasattr(chi0, "is_trivial") and chi0.is_trivial()):
        raise ValueError("the duplication scalar is defined for trivial chi0 only")
    return shift_argument(bc.lpoly, Fraction(1, 2)) / script_L(cover, n, "trivial")


def gkz_integrand(bc: BCLInput, cover: CoverData, m: int) -> ExpPoly:
    """q^{n s deg w} L(s + 1/2, BC(pi) x chi) with n = 2m."""
    return ExpPoly.monomial(-2 * m * cover.deg_omega, cover.q) * shift_argument(bc.lpoly, Fraction(1, 2))


def gkz_rhs(bc: BCLInput, E2: LineBundleClass, cover: CoverData, m: int, r: int) -> CycNumber:
    """f q^{m d(E2)} times the r-th central derivative of the integrand."""
    _require_even(r)
    if m < 1:
        raise ValueError("m must be positive")
    if not is_selfdual(E2, cover):
        raise ValueError(f"E2 = {E2} is not self-dual")
    deriv = central_derivative(gkz_integrand(bc, cover, m), r).value
    return bc.f * _qpow(cover.q, m * d_invariant(E2, cover)) * deriv
