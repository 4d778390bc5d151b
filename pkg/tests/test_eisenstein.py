from __future__ import annotations

from fractions import Fraction

import pytest

from shtuka_degrees.bundles import selfdual_classes
from shtuka_degrees.curve_zeta import char_lfunction, script_L
from shtuka_degrees.eisenstein import (
    CokernelDescriptor,
    chi_of,
    degenerate_rank2_closed_form,
    degenerate_rank2_coefficient,
    doubling_coefficient,
    intertwining_constant,
    iso_coefficient,
    zero_density_plugin,
)
from shtuka_degrees.errors import UnresolvedCensusError
from shtuka_degrees.exact_algebra import ExpFraction, ExpPoly, central_derivative
from shtuka_degrees.picard import LineBundleClass


def order_two_twist(ws):
    """An order-two character and a self-dual class where it is -1.

    Trivial-restriction characters are trivial on self-dual classes of the F_5 cover,
    so the search runs over both restriction tags.
    """
    for chi in ws.characters["trivial"] + ws.characters["eta"]:
        if chi.order != 2:
            continue
        for E in selfdual_classes(ws.cover):
            if chi_of(chi, E, ws.cover) == -1:
                return chi, E
    raise AssertionError("no order-two twist found")


def test_iso_coefficient(f5):
    c = f5.cover
    E2s = selfdual_classes(c)
    trivial = f5.characters["trivial"][0]
    assert iso_coefficient([E2s[0]], trivial, c) == 1
    chi, E = order_two_twist(f5)
    assert iso_coefficient([E], chi, c) == -1
    assert iso_coefficient([E, E2s[0]], chi, c) == -1
    for chi in f5.characters["trivial"] + f5.characters["eta"]:
        coeff = iso_coefficient([E, E2s[1]], chi, c)
        for r in range(1, 4):
            assert central_derivative(coeff, r).value == 0
    with pytest.raises(ValueError):
        iso_coefficient([LineBundleClass(1, E.pic0)], trivial, c)


def test_unnormalized_iso_coefficient(f5):
    c = f5.cover
    E = selfdual_classes(c)[0]
    chi = f5.characters["trivial"][0]
    raw = iso_coefficient([E], chi, c, normalized=False)
    assert isinstance(raw, ExpFraction)
    # n = 1 with trivial chi0: q^{s deg w} L_1(s, 1) = L(2s + 1, 1) = zeta_X(2s + 1)
    zeta = char_lfunction(c, "trivial").value
    assert raw * zeta.substitute(Fraction(1, 5), 2) == 1
    both = iso_coefficient([E, E], chi, c, normalized=False)
    assert both * script_L(c, 2, "trivial") == 1


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("chi0", ["trivial", "eta"])
def test_intertwining_involution(f5, genus2, n, chi0):
    for ws in (f5, genus2):
        cM = intertwining_constant(ws.cover, n, chi0)
        assert cM * cM.reflect() == 1


def test_intertwining_examples(f5):
    c = f5.cover
    # n = 1, chi0 = eta: L_1(s, eta) = L(2s + 1, eta) = 1
    assert intertwining_constant(c, 1, "eta") == 1
    # n = 2, chi0 trivial: L_2 = L(2s + 1, eta) L(2s + 2, 1) = L(2s + 2, 1), finite at s = 0
    L2 = char_lfunction(c, "trivial").value.substitute(Fraction(1, 25), 2)
    assert script_L(c, 2, "trivial") == L2
    assert not script_L(c, 2, "trivial").den.value_at_center().is_zero()
    assert intertwining_constant(c, 2, "trivial") == L2.reflect() / L2


def test_genus_drop_examples(f5):
    c = f5.cover
    E2 = selfdual_classes(c)[0]
    chi = f5.characters["trivial"][0]
    E1 = LineBundleClass(3, f5.pic.Xp.zero)
    t = ExpPoly.monomial(1, 5)
    expected = (t**3 + ExpPoly.monomial(-3, 5)).scale(125)
    assert degenerate_rank2_closed_form(E1, E2, chi, c) == expected
    assert degenerate_rank2_coefficient(E1, E2, chi, c) == expected
    for r in (1, 3, 5):
        assert central_derivative(expected, r).value == 0


def test_genus_drop_scales_by_character(f5):
    c = f5.cover
    E2 = selfdual_classes(c)[0]
    for chi in f5.characters["trivial"]:
        for g in f5.pic.Xp.elements():
            E1 = LineBundleClass(2, f5.pic.Xp.zero)
            E1g = LineBundleClass(2, g)
            base = degenerate_rank2_coefficient(E1, E2, chi, c)
            twisted = degenerate_rank2_coefficient(E1g, E2, chi, c)
            factor = chi_of(chi, LineBundleClass(0, g), c)
            assert twisted == base.scale(factor)


def test_genus_drop_dual_path_genus_two(genus2):
    c = genus2.cover
    chi = genus2.characters["trivial"][0]
    for E2 in selfdual_classes(c):
        for d in range(-4, 7):
            E1 = LineBundleClass(d, ())
            assert degenerate_rank2_coefficient(E1, E2, chi, c) == degenerate_rank2_closed_form(E1, E2, chi, c)


def test_eta_restriction_coefficients_are_reflect_invariant(f5):
    c = f5.cover
    E2 = selfdual_classes(c)[0]
    for chi in f5.characters["eta"]:
        for d in range(-3, 4):
            coeff = degenerate_rank2_coefficient(LineBundleClass(d, f5.pic.Xp.zero), E2, chi, c)
            assert coeff.reflect() == coeff
            for r in (1, 3):
                assert central_derivative(coeff, r).value == 0
        with pytest.raises(ValueError):
            degenerate_rank2_closed_form(LineBundleClass(1, f5.pic.Xp.zero), E2, chi, c)


def test_doubling_coefficient(f5):
    c = f5.cover
    zero = f5.pic.Xp.zero
    E2 = selfdual_classes(c)[0]
    chi = f5.characters["trivial"][0]
    E1 = LineBundleClass(3, zero)
    assert doubling_coefficient(E1, "zero", E2, chi, c) == degenerate_rank2_closed_form(E1, E2, chi, c)
    with pytest.raises(UnresolvedCensusError) as exc:
        doubling_coefficient(LineBundleClass(-3, zero), "zero", E2, chi, c)
    assert exc.value.term_count == 125
    assert "125 unresolved terms" in str(exc.value)
    # the stub plugin leaves only the diagonal term
    stub = doubling_coefficient(LineBundleClass(-3, zero), "zero", E2, chi, c, zero_density_plugin)
    assert stub == degenerate_rank2_coefficient(LineBundleClass(-3, zero), E2, chi, c)


def test_density_plugin_contract(f5):
    c = f5.cover
    zero = f5.pic.Xp.zero
    E2 = selfdual_classes(c)[0]
    chi = f5.characters["trivial"][0]
    calls: list[CokernelDescriptor] = []

    def plugin(desc, q):
        calls.append(desc)
        return ExpPoly.constant(1, q)

    E1 = LineBundleClass(-2, zero)
    total = doubling_coefficient(E1, "zero", E2, chi, c, plugin)
    assert len(calls) == 24 and all(d.h == 2 for d in calls)
    assert sorted(d.section_index for d in calls) == list(range(1, 25))
    assert total == degenerate_rank2_coefficient(E1, E2, chi, c) + 24
    calls.clear()
    doubling_coefficient(LineBundleClass(3, zero), "other", E2, chi, c, plugin)
    assert [d.section_index for d in calls] == [0]
