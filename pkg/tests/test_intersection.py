from __future__ import annotations

import math
from fractions import Fraction

import pytest

from shtuka_degrees.bundles import HermitianPair, d_invariant, selfdual_classes
from shtuka_degrees.curve_zeta import char_lfunction, script_L
from shtuka_degrees.eisenstein import chi_of
from shtuka_degrees.errors import InvariantError, SpecParseError, UnresolvedCensusError, UnsupportedError
from shtuka_degrees.exact_algebra import CycNumber, ExpPoly, sqrt_q_power
from shtuka_degrees.intersection import (
    BCLInput,
    asw_degree,
    degree_consistency,
    dkernel_coefficient,
    duplication_scalar,
    gkz_rhs,
    u1_cycle_degree,
    z2_intersection_degree,
)
from shtuka_degrees.picard import LineBundleClass

from oracles import numeric_derivative


def trivial_chi(ws):
    return ws.characters["trivial"][0]


def test_worked_example(f5):
    c, zero = f5.cover, f5.pic.Xp.zero
    E1, E2 = LineBundleClass(3, zero), selfdual_classes(c)[0]
    chi = trivial_chi(f5)
    pair = HermitianPair(E1, E2)
    assert asw_degree(pair, chi, c, 2).value == 18
    assert asw_degree(pair, chi, c, 0).value == 2
    assert u1_cycle_degree(E1, E2, c, 2).value == 18
    result = z2_intersection_degree(E1, "zero", E2, chi, c, 2)
    assert (result.value, result.provenance) == (18, "doubling")
    assert dkernel_coefficient(E1, "zero", E2, chi, c, 2) == 2250
    assert dkernel_coefficient(E1, "zero", E2, chi, c, 0) == 250


def test_dkernel_twist(f5):
    c = f5.cover
    E2 = selfdual_classes(c)[0]
    twisted = 0
    for chi in f5.characters["trivial"]:
        if chi.order != 2:
            continue
        for E1 in f5.pic.xp_classes(3):
            value = dkernel_coefficient(E1, "zero", E2, chi, c, 2)
            if chi_of(chi, E1, c) == -1:
                assert value == -2250
                twisted += 1
            else:
                assert value == 2250
    assert twisted > 0


def test_iso_degrees_vanish(f5):
    c = f5.cover
    chi = trivial_chi(f5)
    for E in selfdual_classes(c):
        assert asw_degree(E, chi, c, 0).value == 1
        assert asw_degree(E, chi, c, 2).value == 0
        assert asw_degree(HermitianPair(E, E, "iso", "iso"), chi, c, 4).value == 0


def test_u1_cycle_examples(f5):
    c, zero = f5.cover, f5.pic.Xp.zero
    E2 = selfdual_classes(c)[0]
    assert u1_cycle_degree(LineBundleClass(0, zero), E2, c, 2).value == 0
    assert u1_cycle_degree(LineBundleClass(0, zero), E2, c, 0).value == 2
    with pytest.raises(ValueError):
        u1_cycle_degree(LineBundleClass(0, zero), E2, c, 3)
    with pytest.raises(ValueError):
        asw_degree(HermitianPair(LineBundleClass(0, zero), E2), trivial_chi(f5), c, 1)


def test_u1_cycle_genus_two_oracle(genus2):
    """Term-by-term expansion of 2 (1/(log q)^r) d^r/ds^r q^{d s} L(2s, eta) at s = 0."""
    c = genus2.cover
    coeffs = [int(c.eta_l.coefficient(k).x[0]) for k in range(c.eta_l.max_degree + 1)]
    assert coeffs == [1, 1, 3]
    E2 = selfdual_classes(c)[0]
    for deg in range(-3, 6):
        E1 = LineBundleClass(deg, ())
        d = d_invariant(E1, c)
        for r in (0, 2, 4):
            # q^{ds} L(2s, eta) = sum_j a_j t^{2j - d}
            expected = 2 * sum(a * (-(2 * j - d)) ** r for j, a in enumerate(coeffs))
            assert u1_cycle_degree(E1, E2, c, r).value == expected
    assert u1_cycle_degree(LineBundleClass(1, ()), E2, c, 2).value == 58


def test_degree_consistency(f5, genus2):
    for ws in (f5, genus2):
        c = ws.cover
        for chi in ws.characters["trivial"]:
            for E2 in selfdual_classes(c):
                for deg in range(-5, 6):
                    E1 = ws.pic.xp_classes(deg)[-1]
                    for r in range(6):
                        report = degree_consistency(E1, E2, chi, c, r)
                        assert report.agree
                        if r % 2:
                            assert report.asw == 0
                        elif c.genus == 1:
                            assert report.asw == 2 * d_invariant(E1, c) ** r


def test_degree_consistency_raises_on_mismatch(f5, monkeypatch):
    import shtuka_degrees.intersection as mod

    c = f5.cover
    E1, E2 = LineBundleClass(3, f5.pic.Xp.zero), selfdual_classes(c)[0]
    monkeypatch.setattr(mod, "u1_cycle_integrand", lambda E, cover: ExpPoly.monomial(1, cover.q))
    with pytest.raises(InvariantError) as exc:
        mod.degree_consistency(E1, E2, trivial_chi(f5), c, 2)
    assert exc.value.check == "degree-consistency"


def test_z2_degree(f5):
    c, zero = f5.cover, f5.pic.Xp.zero
    E2 = selfdual_classes(c)[0]
    chi = trivial_chi(f5)
    for deg in range(1, 6):
        E1 = LineBundleClass(deg, zero)
        for r in (0, 2, 4):
            assert z2_intersection_degree(E1, "zero", E2, chi, c, r).value == u1_cycle_degree(E1, E2, c, r).value
    # r = 0 gives twice L(0, eta), which is 2 on elliptic covers
    assert z2_intersection_degree(LineBundleClass(2, zero), "zero", E2, chi, c, 0).value == 2
    with pytest.raises(UnresolvedCensusError):
        z2_intersection_degree(LineBundleClass(-3, zero), "zero", E2, chi, c, 2)
    with pytest.raises(UnsupportedError):
        asw_degree(HermitianPair(LineBundleClass(1, zero), E2, "other"), chi, c, 2)


def test_duplication_scalar(f5):
    c = f5.cover
    t = ExpPoly.monomial(1, 5)
    one = BCLInput(ExpPoly.constant(1, 5), CycNumber(1, q=5))
    for n in (1, 2, 3):
        assert duplication_scalar(one, c, n) * script_L(c, n, "trivial") == 1
    sq = BCLInput(t * t, CycNumber(1, q=5))
    assert duplication_scalar(sq, c, 2) * script_L(c, 2, "trivial") == (t * t).scale(Fraction(1, 5))
    zeta = char_lfunction(c, "trivial").value
    assert duplication_scalar(one, c, 2) * zeta.substitute(Fraction(1, 25), 2) == 1
    with pytest.raises(ValueError):
        duplication_scalar(one, c, 2, "eta")


def test_gkz_rhs_trivial_cases(f5):
    c = f5.cover
    E2 = selfdual_classes(c)[0]
    f = CycNumber([0, 1], order=3, q=5)
    bc = BCLInput(ExpPoly.constant(1, 5), f)
    assert gkz_rhs(bc, E2, c, 1, 0) == f
    assert gkz_rhs(bc, E2, c, 1, 2) == 0
    with pytest.raises(ValueError):
        gkz_rhs(bc, E2, c, 1, 1)
    with pytest.raises(ValueError):
        gkz_rhs(bc, E2, c, 0, 2)
    with pytest.raises(ValueError):
        gkz_rhs(bc, LineBundleClass(1, E2.pic0), c, 1, 2)


def test_gkz_rhs_linearity(genus2):
    c = genus2.cover
    E2 = selfdual_classes(c)[0]
    t = ExpPoly.monomial(1, 3)
    p1, p2 = 1 - t, t * t + t.scale(2) - 3
    f1, f2 = CycNumber([1, 2], order=4, q=3), CycNumber(Fraction(-1, 2), q=3)
    for m, r in ((1, 0), (1, 2), (2, 4)):
        lhs = gkz_rhs(BCLInput(p1 + p2, f1), E2, c, m, r)
        assert lhs == gkz_rhs(BCLInput(p1, f1), E2, c, m, r) + gkz_rhs(BCLInput(p2, f1), E2, c, m, r)
        lhs = gkz_rhs(BCLInput(p1, f1 + f2), E2, c, m, r)
        assert lhs == gkz_rhs(BCLInput(p1, f1), E2, c, m, r) + gkz_rhs(BCLInput(p1, f2), E2, c, m, r)


def test_gkz_rhs_genus_two_numeric(genus2):
    c = genus2.cover
    E2 = selfdual_classes(c)[0]
    t = ExpPoly.monomial(1, 3)
    exact = gkz_rhs(BCLInput(1 - t, CycNumber(1, q=3)), E2, c, 1, 2)
    # the integrand is q^{4s} (1 - q^{-1/2} q^{-s}); d(E2) = 0
    q = 3.0
    numeric = numeric_derivative(lambda s: q ** (4 * s) * (1 - q ** (-0.5 - s)), 2) / math.log(q) ** 2
    assert abs(numeric - exact.to_complex()) <= 1e-9 * abs(exact.to_complex())
    assert exact == 16 - sqrt_q_power(3, -1) * 9


def test_bcl_input_parsing(tmp_path):
    bc = BCLInput.from_json({"lpoly": [[0, "1"], [1, "-1/3"]], "f": "2"}, 3)
    assert bc.lpoly == 1 - ExpPoly.monomial(1, 3).scale(Fraction(1, 3))
    assert bc.f == 2
    for bad in ({}, {"lpoly": "x"}, {"lpoly": [[0, "a/b"]]}):
        with pytest.raises(SpecParseError):
            BCLInput.from_json(bad, 3)
    path = tmp_path / "bcl.json"
    path.write_text("[1, 2]")
    with pytest.raises(SpecParseError):
        BCLInput.load(path, 3)
    path.write_text("{not json")
    with pytest.raises(SpecParseError):
        BCLInput.load(path, 3)
    with pytest.raises(SpecParseError):
        BCLInput.load(tmp_path / "missing.json", 3)
