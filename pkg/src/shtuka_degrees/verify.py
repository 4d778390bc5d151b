"""Workspaces and the named verification suite run by ``verify-all``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

from .bundles import complement_census, d_invariant, is_selfdual, selfdual_classes, sigma_serre_dual
from .curve_zeta import (
    CoverData,
    build_cover,
    char_lfunction,
    count_points,
    eta_twist,
    l_functional_equation_holds,
    load_curve_spec,
    weil_bounds_hold,
    zeta_functional_equation_holds,
)
from .eisenstein import (
    degenerate_rank2_closed_form,
    degenerate_rank2_coefficient,
    intertwining_constant,
)
from .errors import InvariantError, SpecParseError
from .exact_algebra import CycNumber, ExpFraction, ExpPoly, central_derivative
from .intersection import degree_consistency, u1_cycle_degree
from .picard import (
    Character,
    LineBundleClass,
    PicModel,
    characters_of_base,
    chi_value,
    closed_point_classes,
    enumerate_characters,
    restriction_of,
    splits_in_cover,
)

MAX_ORDER = 4
DEGREE_RANGE = range(-5, 6)

BUILTIN_SPECS = {
    "f5": "f5_model.spec",
    "f3": "f3_model.spec",
    "f7": "f7_model.spec",
    "f11": "f11_model.spec",
    "f5b": "f5b_model.spec",
    "genus2": "genus2_table.spec",
}


def builtin_spec_path(name: str) -> Path:
    if name not in BUILTIN_SPECS:
        raise SpecParseError(f"unknown built-in spec {name!r}; choose from {sorted(BUILTIN_SPECS)}")
    return Path(str(resources.files("shtuka_degrees") / "data" / BUILTIN_SPECS[name]))


def resolve_spec(spec: str) -> Path:
    """A path, or ``builtin:NAME`` for a packaged example."""
    if spec.startswith("builtin:"):
        return builtin_spec_path(spec.split(":", 1)[1])
    return Path(spec)


@dataclass
class Workspace:
    cover: CoverData
    characters: dict[str, list[Character]]
    source: str = ""

    @property
    def pic(self) -> PicModel:
        return self.cover.pic

    @property
    def trivial_characters(self) -> list[Character]:
        return self.characters["trivial"]


def load_workspace(spec: str, max_order: int = MAX_ORDER) -> Workspace:
    """Parse, build the cover, and re-assert the load-time invariants."""
    curve = load_curve_spec(resolve_spec(spec))
    cover = build_cover(curve)
    for tag in ("trivial", "eta"):
        if not l_functional_equation_holds(cover, char_lfunction(cover, tag).value):
            raise InvariantError("l-functional-equation", f"L(s, {tag}) fails its functional equation")
    if cover.mode == "model" and cover.pic.norm_index() != 2:
        raise InvariantError("pic-norm-index", "norms do not have index 2")
    chars = {tag: enumerate_characters(cover.pic, tag, max_order) for tag in ("trivial", "eta")}
    return Workspace(cover, chars, spec)


# ----------------------------------------------------------------------------
# named checks


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    cases: int = 0

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "cases": self.cases, "detail": self.detail}


class _Fail(Exception):
    pass


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise _Fail(msg)


def power_series(f: ExpPoly | ExpFraction, upto: int) -> list[CycNumber]:
    """Coefficients of t^0..t^upto of a power series with nonzero constant denominator."""
    if isinstance(f, ExpPoly):
        return [f.coefficient(k) for k in range(upto + 1)]
    num, den = f.num, f.den
    if num.min_degree < 0 or den.min_degree < 0 or den.coefficient(0).is_zero():
        raise ValueError("not a power series with invertible constant term")
    inv0 = den.coefficient(0).inverse()
    out: list[CycNumber] = []
    for k in range(upto + 1):
        acc = num.coefficient(k)
        for j in range(1, k + 1):
            acc = acc - den.coefficient(j) * out[k - j]
        out.append(acc * inv0)
    return out


def euler_product_series(pic: PicModel, chi0: Character, upto: int) -> list[CycNumber]:
    """prod over closed points x of X of (1 - chi0(x) t^deg x)^{-1}, through t^upto."""
    series: list[CycNumber] = [CycNumber(1)] + [CycNumber(0)] * upto
    for d in range(1, upto + 1):
        for cls in closed_point_classes(pic, d):
            v = chi_value(chi0, cls)
            # multiply by 1 + v T^d + v^2 T^{2d} + ...
            new = list(series)
            for k in range(upto + 1):
                if series[k].is_zero():
                    continue
                j, w = 1, v
                while k + j * d <= upto:
                    new[k + j * d] = new[k + j * d] + series[k] * w
                    j += 1
                    w = w * v
            series = new
    return series


def euler_depth(q: int) -> int:
    """Largest d with q^d <= 1000, the enumeration budget for closed points."""
    return max(1, int(math.log(1000, q) + 1e-9))


def _base_characters(ws: Workspace) -> list[Character]:
    return characters_of_base(ws.pic, MAX_ORDER)


def _check_weil(ws: Workspace) -> int:
    c = ws.cover
    if c.mode == "model":
        counts = [count_points(c.base, d) for d in (1, 2)]
        countsp = [count_points(c.cover, d) for d in (1, 2)]
    else:
        counts, countsp = list(c.base.counts_x), list(c.base.counts_xprime)
    _expect(weil_bounds_hold(counts, c.genus, c.q), "X violates the Weil bounds")
    _expect(weil_bounds_hold(countsp, c.genus_xprime, c.q), "X' violates the Weil bounds")
    return len(counts) + len(countsp)


def _check_zeta_fe(ws: Workspace) -> int:
    c = ws.cover
    _expect(zeta_functional_equation_holds(c.zeta_x, c.genus), "P_X fails P(t) = q^g t^2g P(1/qt)")
    _expect(c.zeta_x.coefficient(0) == 1, "P_X(0) != 1")
    return 1


def _check_zeta_fe_cover(ws: Workspace) -> int:
    c = ws.cover
    _expect(zeta_functional_equation_holds(c.zeta_xprime, c.genus_xprime), "P_X' fails its functional equation")
    return 1


def _check_divisibility(ws: Workspace) -> int:
    c = ws.cover
    _expect(c.zeta_x * c.eta_l == c.zeta_xprime, "P_X' != P_X L(s, eta)")
    _expect(c.eta_l.max_degree == c.deg_omega, "deg L(s, eta) != deg omega_X")
    return 1


def _check_recurrence(ws: Workspace) -> int:
    c = ws.cover
    if c.mode != "model":
        return 0
    for model in (c.base, c.cover):
        count_points(model, 2)  # raises on disagreement
    return 2


def _check_l_fe(ws: Workspace) -> int:
    c = ws.cover
    n = 0
    chi0s: list = ["trivial", "eta"]
    for tag in ("trivial", "eta"):
        chi0s += [restriction_of(ws.pic, chi) for chi in ws.characters[tag]]
    if c.mode == "model":
        chi0s += _base_characters(ws)
    for chi0 in chi0s:
        inverse = chi0 if isinstance(chi0, str) else chi0**-1
        for i in (0, 1):
            L = char_lfunction(c, eta_twist(c, chi0, i)).value
            dual = char_lfunction(c, eta_twist(c, inverse, i)).value
            _expect(l_functional_equation_holds(c, L, dual), f"functional equation fails for eta^{i} {chi0}")
            n += 1
    return n


def _check_euler(ws: Workspace) -> int:
    c = ws.cover
    if c.mode != "model":
        return 0
    depth = euler_depth(c.q)
    n = 0
    for chi0 in _base_characters(ws):
        L = char_lfunction(c, chi0).value
        _expect(power_series(L, depth) == euler_product_series(ws.pic, chi0, depth), f"Euler product mismatch for {chi0.describe()}")
        n += 1
    return n


def _check_pic_maps(ws: Workspace) -> int:
    pic = ws.pic
    if pic.mode != "model":
        return 0
    n = 0
    for d in (-1, 0, 1, 2):
        for c in pic.X.elements():
            cls = LineBundleClass(d, c)
            _expect(pic.norm(pic.pullback(cls)) == LineBundleClass(2 * d, pic.X.mul(2, c)), "Nm(pullback) != 2")
            _expect(pic.sigma(pic.pullback(cls)) == pic.pullback(cls), "sigma moves a pulled-back class")
            n += 1
        for c in pic.Xp.elements():
            cls = LineBundleClass(d, c)
            _expect(pic.sigma(pic.sigma(cls)) == cls, "sigma is not an involution")
            _expect(pic.pullback(pic.norm(cls)) == pic.add(cls, pic.sigma(cls)), "pullback(Nm) != 1 + sigma")
            n += 1
    _expect(pic.norm_index() == 2, "[Pic X : Nm Pic X'] != 2")
    return n


def _check_eta(ws: Workspace) -> int:
    pic = ws.pic
    if pic.mode != "model":
        return 0
    eta = pic.eta
    _expect(not eta.is_trivial() and (eta * eta).is_trivial(), "eta is not of order two")
    n = 0
    for c in pic.Xp.elements():
        for d in (0, 1):
            _expect(chi_value(eta, pic.norm(LineBundleClass(d, c))) == 1, "eta is nontrivial on a norm")
            n += 1
    return n


def _check_eta_splitting(ws: Workspace) -> int:
    pic = ws.pic
    if pic.mode != "model":
        return 0
    n = 0
    for P in pic.x_curve.points():
        cls = LineBundleClass(1, pic.X.coord(P))
        _expect((chi_value(pic.eta, cls) == 1) == splits_in_cover(pic, 1, P), f"splitting mismatch at {P}")
        n += 1
    return n


def _check_char_restriction(ws: Workspace) -> int:
    pic = ws.pic
    n = 0
    for tag, chars in ws.characters.items():
        _expect(tag != "trivial" or any(ch.is_trivial() for ch in chars), "trivial character missing")
        for chi in chars:
            _expect(chi.order <= MAX_ORDER, "order bound violated")
            for g in pic.x_generators():
                v = chi_value(chi, pic.pullback(g))
                want = CycNumber(1) if tag == "trivial" else chi_value(pic.eta, g)
                _expect(v == want, f"{chi.describe()} has the wrong restriction")
            n += 1
    return n


def _check_char_sigma(ws: Workspace) -> int:
    pic = ws.pic
    if pic.mode != "model":
        return 0
    n = 0
    for chars in ws.characters.values():
        for chi in chars:
            chi0 = restriction_of(pic, chi)
            for d in (0, 1):
                for c in pic.Xp.elements():
                    cls = LineBundleClass(d, c)
                    lhs = chi_value(chi, cls) * chi_value(chi, pic.sigma(cls))
                    _expect(lhs == chi_value(chi0, pic.norm(cls)), "chi(c) chi(sigma c) != chi0(Nm c)")
                    if d == 0:
                        _expect(chi_value(chi, pic.sigma(cls)) == chi_value(chi, cls), "sigma moves chi on Pic^0")
                    n += 1
    return n


def _classes_grid(ws: Workspace, degrees=DEGREE_RANGE) -> list[LineBundleClass]:
    return [cls for d in degrees for cls in ws.pic.xp_classes(d)]


def _check_duals(ws: Workspace) -> int:
    c = ws.cover
    n = 0
    for cls in _classes_grid(ws, range(-2, 3)):
        dual = sigma_serre_dual(cls, c)
        _expect(sigma_serre_dual(dual, c) == cls, "sigma-Serre duality is not an involution")
        _expect(dual.degree == 2 * c.genus_xprime - 2 - cls.degree, "dual has the wrong degree")
        if is_selfdual(cls, c):
            _expect(d_invariant(cls, c) == 0, "self-dual class with d != 0")
        n += 1
    _expect(bool(selfdual_classes(c)), "no self-dual classes")
    return n


def _check_intertwining(ws: Workspace) -> int:
    n = 0
    for k in (1, 2):
        for chi0 in ("trivial", "eta"):
            cm = intertwining_constant(ws.cover, k, chi0)
            _expect(cm * cm.reflect() == 1, f"c_M(s) c_M(-s) != 1 for n={k}, {chi0}")
            n += 1
    return n


def _grid(ws: Workspace):
    c = ws.cover
    E1s = _classes_grid(ws)
    for E2 in selfdual_classes(c):
        for chi in ws.trivial_characters:
            for E1 in E1s:
                yield E1, E2, chi


def _check_dual_path(ws: Workspace) -> int:
    n = 0
    for E1, E2, chi in _grid(ws):
        a = degenerate_rank2_coefficient(E1, E2, chi, ws.cover)
        b = degenerate_rank2_closed_form(E1, E2, chi, ws.cover)
        _expect(a == b, f"genus-drop paths disagree at E1={E1}, E2={E2}, {chi.describe()}")
        n += 1
    return n


def _check_coefficient_fe(ws: Workspace) -> int:
    n = 0
    c = ws.cover
    coeffs = []
    for E1, E2, chi in _grid(ws):
        coeffs.append(degenerate_rank2_coefficient(E1, E2, chi, c))
    for chi in ws.characters["eta"]:
        for E2 in selfdual_classes(c):
            coeffs.append(degenerate_rank2_coefficient(LineBundleClass(1, E2.pic0), E2, chi, c))
    for f in coeffs:
        _expect(f.reflect() == f, "coefficient is not invariant under s -> -s")
        for r in (1, 3, 5):
            _expect(central_derivative(f, r).value.is_zero(), f"odd derivative r={r} is nonzero")
        n += 1
    return n


def _check_degree_consistency(ws: Workspace) -> int:
    n = 0
    c = ws.cover
    for E1, E2, chi in _grid(ws):
        for r in (0, 2, 4):
            rep = degree_consistency(E1, E2, chi, c, r)
            if c.genus == 1:
                d = d_invariant(E1, c)
                _expect(rep.asw == 2 * Fraction(d) ** r, "degree != 2 d(E1)^r")
            n += 1
    return n


def _check_census(ws: Workspace) -> int:
    c = ws.cover
    if c.mode != "model":
        return 0
    n = 0
    for E2 in selfdual_classes(c):
        for E1 in _classes_grid(ws, range(-3, 4)):
            census = complement_census(E1, "zero", E2, c)
            deg = -E1.degree - E2.degree
            if deg >= 1:
                _expect(census.h == deg, "h != degree for a positive hom bundle")
            elif deg < 0:
                _expect(census.h == 0, "h != 0 for a negative hom bundle")
            _expect(census.term_count == c.q**census.h, "census size is not q^h")
            n += 1
    return n


def _check_u1_formula(ws: Workspace) -> int:
    c = ws.cover
    n = 0
    for E1, E2, chi in _grid(ws):
        if not chi.is_trivial():
            continue
        for r in (0, 2):
            g = c.eta_l.substitute(1, 2) * ExpPoly.monomial(-d_invariant(E1, c), c.q)
            oracle = 2 * sum(
                (coef * Fraction(-k) ** r for k, coef in g.terms.items()), CycNumber(0)
            )
            _expect(u1_cycle_degree(E1, E2, c, r).value == oracle, "term-by-term expansion disagrees")
            n += 1
    return n


CHECKS: list[tuple[str, Callable[[Workspace], int]]] = [
    ("weil-bounds", _check_weil),
    ("zeta-functional-equation", _check_zeta_fe),
    ("zeta-functional-equation-cover", _check_zeta_fe_cover),
    ("zeta-cover-divisibility", _check_divisibility),
    ("count-recurrence", _check_recurrence),
    ("l-functional-equation", _check_l_fe),
    ("euler-product", _check_euler),
    ("pic-norm-pullback-sigma", _check_pic_maps),
    ("eta-trivial-on-norms", _check_eta),
    ("eta-splitting", _check_eta_splitting),
    ("character-restriction", _check_char_restriction),
    ("character-sigma-compatibility", _check_char_sigma),
    ("serre-dual-involution", _check_duals),
    ("intertwining-involution", _check_intertwining),
    ("genus-drop-dual-path", _check_dual_path),
    ("coefficient-functional-equation", _check_coefficient_fe),
    ("degree-consistency", _check_degree_consistency),
    ("complement-census", _check_census),
    ("u1-cycle-expansion", _check_u1_formula),
]

SUMMARY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["spec", "mode", "passed", "checks", "firstFailure"],
    "additionalProperties": False,
    "properties": {
        "spec": {"type": "string"},
        "mode": {"enum": ["model", "table", "unknown"]},
        "passed": {"type": "boolean"},
        "firstFailure": {"type": ["string", "null"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "passed", "cases", "detail"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "passed": {"type": "boolean"},
                    "cases": {"type": "integer", "minimum": 0},
                    "detail": {"type": "string"},
                },
            },
        },
    },
}


@dataclass
class Summary:
    spec: str
    mode: str
    checks: list[CheckResult] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> str | None:
        return next((c.name for c in self.checks if not c.passed), None)

    def to_json(self) -> dict:
        return {
            "spec": self.spec,
            "mode": self.mode,
            "passed": self.passed,
            "firstFailure": self.first_failure,
            "checks": [c.to_json() for c in self.checks],
        }


def run_checks(ws: Workspace) -> Summary:
    summary = Summary(ws.source, ws.cover.mode)
    for name, fn in CHECKS:
        try:
            cases = fn(ws)
        except (_Fail, InvariantError) as exc:
            summary.checks.append(CheckResult(name, False, str(exc)))
            continue
        if cases:
            summary.checks.append(CheckResult(name, True, "", cases))
    return summary


def verify_all(spec: str) -> Summary:
    """Load ``spec`` and run every applicable check.

    Invariant failures while loading are reported as a single failed check.
    Parse errors propagate.
    """
    try:
        ws = load_workspace(spec)
    except InvariantError as exc:
        return Summary(spec, "unknown", [CheckResult(exc.check, False, str(exc))])
    return run_checks(ws)
