from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dkf import DrinfeldModule, OrePoly, PolyA, PrimePlace, RationalFn, ore_mul, phi_of, reconstruct_phi, stable_model, torsion_poly
from dkf.drinfeld import torsion_valuation_bounds
from dkf.errors import ParseError
from dkf.parsing import parse_ore, parse_poly, parse_rational
from dkf.tate import TateDatum

from conftest import FIELDS, polys


def R(text, F):
    return parse_rational(text, F)


def module(text, q):
    return DrinfeldModule.from_text(f"q={q}; phi_t = {text}")


def test_commutation_rule(F2, F3):
    for F in (F2, F3):
        c = R("t+1", F)
        tau = parse_ore("tau", F)
        zero = R("0", F)
        assert tau * OrePoly([zero, c], F.size) == OrePoly([zero, zero, c ** F.size], F.size)
    ttau = parse_ore("t*tau", F2)
    assert (ttau * ttau).coeffs[-1] == R("t^3", F2)
    f = parse_ore("t + (t+1)*tau^2", F3)
    assert f * parse_ore("1", F3) == f


@given(st.sampled_from([2, 3]).flatmap(lambda q: st.tuples(st.just(q), polys(FIELDS[q], 2), polys(FIELDS[q], 2), st.integers(0, 3), st.integers(0, 3))))
def test_tau_degree_additivity(args):
    q, a, b, i, j = args
    F = FIELDS[q]
    f = OrePoly([RationalFn.from_poly(PolyA(F, [1]))] * i + [RationalFn.from_poly(a + PolyA.t(F) ** 3)], q)
    g = OrePoly([RationalFn.from_poly(b)] * j + [RationalFn.from_poly(PolyA.t(F))], q)
    assert ore_mul(f, g).degree == f.degree + g.degree


def test_phi_of_examples(F2, F3):
    for F in (F2, F3):
        c = PolyA(F, [F.size - 1])
        assert phi_of(DrinfeldModule.carlitz(F), c).coeffs == (R(str(F.size - 1), F),)
    f = phi_of(DrinfeldModule.carlitz(F3), parse_poly("t^2", F3))
    assert f.coeffs == (R("t^2", F3), R("t^3+t", F3), R("1", F3))
    phi = module("t + (t+1)*tau + t^2*tau^2", 3)
    assert phi_of(phi, PolyA.t(F3)).coeffs == phi.coeffs


def test_torsion_poly_examples(F2, F3):
    f = torsion_poly(DrinfeldModule.carlitz(F2), PolyA.t(F2))
    assert f.exponents() == [1, 2] and f.coeffs == (R("t", F2), R("1", F2))
    f = torsion_poly(DrinfeldModule.carlitz(F3), parse_poly("t^2", F3))
    assert f.exponents() == [1, 3, 9] and f.degree == 9
    assert f.initial == R("t^2", F3)
    f = torsion_poly(module("t + tau + t*tau^2", 2), PolyA.t(F2))
    assert f.exponents() == [1, 2, 4] and f.leading == R("t", F2)


def _random_module(q, coeffs):
    F = FIELDS[q]
    cs = [RationalFn.from_poly(PolyA.t(F))] + [RationalFn.from_poly(c) for c in coeffs]
    cs[-1] = cs[-1] + RationalFn.from_poly(PolyA.t(F) ** 3) if not cs[-1] else cs[-1]
    return DrinfeldModule(F, tuple(cs))


# coefficient degrees grow like q^(r deg a); keep r*(deg a + deg b) <= 9
TAU_BUDGET = 9


@st.composite
def module_and_pair(draw):
    q = draw(st.sampled_from([2, 3]))
    F = FIELDS[q]
    r = draw(st.integers(1, 3))
    coeffs = draw(st.lists(polys(F, 2), min_size=r, max_size=r))
    da = draw(st.integers(0, min(3, TAU_BUDGET // r)))
    db = draw(st.integers(0, min(3, TAU_BUDGET // r - da)))
    a = draw(polys(F, da, nonzero=True))
    b = draw(polys(F, db, nonzero=True))
    return q, coeffs, a, b


@given(module_and_pair())
def test_homomorphism_law(args):
    q, coeffs, a, b = args
    phi = _random_module(q, coeffs)
    assert phi_of(phi, a * b) == phi_of(phi, a) * phi_of(phi, b)
    if a + b:
        assert phi_of(phi, a + b) == phi_of(phi, a) + phi_of(phi, b)
    fa = torsion_poly(phi, a)
    assert fa.initial == RationalFn.from_poly(a)
    assert fa.degree == q ** (phi.rank * a.degree)


def test_module_validation(F2):
    with pytest.raises(ValueError):
        DrinfeldModule(F2, (R("t+1", F2), R("1", F2)))
    with pytest.raises(ValueError):
        DrinfeldModule(F2, (R("t", F2),))


def test_from_text_errors():
    with pytest.raises(ParseError) as exc:
        DrinfeldModule.from_text("q=3; r=2; phi_t = t + (t+1)*tau + t^2**tau^2")
    assert exc.value.position is not None and exc.value.position > 20
    with pytest.raises(ParseError, match="declared rank"):
        DrinfeldModule.from_text("q=3; r=1; phi_t = t + tau^2")
    with pytest.raises(ParseError):
        DrinfeldModule.from_text("q=6; phi_t = t + tau")
    phi = DrinfeldModule.from_text("q=3; r=2; phi_t = t + (t+1)*tau + t^2*tau^2")
    assert phi.rank == 2 and str(phi) == "q=3; r=2; phi_t = t + (t+1)*tau + t^2*tau^2"


def test_stable_model_examples(F2, F3):
    P = PrimePlace.finite(PolyA.t(F2))
    red = stable_model(module("t + tau + t*tau^2", 2), P)
    assert (red.mu, red.r_psi, red.kind) == (0, 1, "stable-bad")
    red = stable_model(module("t + tau + (t+1)*tau^2", 2), P)
    assert (red.mu, red.r_psi, red.kind) == (0, 2, "good")
    P3 = PrimePlace.finite(PolyA.t(F3))
    red = stable_model(module("t + t^-1*tau", 3), P3)
    assert red.mu == Fraction(-1, 2) and red.kind == "potentially-stable" and red.tame_degree == 2


@given(st.sampled_from([2, 3]).flatmap(lambda q: st.tuples(st.just(q), st.lists(st.integers(-4, 4), min_size=2, max_size=3))))
def test_stable_model_twist(args):
    q, exps = args
    F = FIELDS[q]
    P = PrimePlace.finite(PolyA.t(F))
    t = RationalFn.from_poly(PolyA.t(F))
    coeffs = (t,) + tuple(t**e + (t ** (e + 1)) for e in exps)
    phi = DrinfeldModule(F, coeffs)
    red = stable_model(phi, P)
    assert 1 <= red.r_psi <= phi.rank
    assert red.kind in ("good", "stable-bad", "potentially-stable")
    if red.mu.denominator == 1:
        c = t ** (-int(red.mu))
        twisted = [g * c ** (q**i - 1) for i, g in enumerate(phi.coeffs[1:], start=1)]
        vals = [g.valuation(P) for g in twisted]
        assert all(v >= 0 for v in vals)
        assert vals[red.r_psi - 1] == 0
        assert (red.kind == "good") == (red.r_psi == phi.rank)
    else:
        assert red.kind == "potentially-stable"


def test_valuation_bounds_examples(F2, F3):
    t3 = PolyA.t(F3)
    P = PrimePlace.finite(t3)
    upper, lower = torsion_valuation_bounds(DrinfeldModule.carlitz(F3), P, t3, 1)
    assert (upper, lower) == (Fraction(1, 2), 0)
    away = PrimePlace.finite(parse_poly("t+1", F3))
    assert torsion_valuation_bounds(DrinfeldModule.carlitz(F3), away, t3, 2) == (0, 0)
    with pytest.raises(ValueError):
        torsion_valuation_bounds(module("t + t^-1*tau", 3), P, t3, 1)


def _slopes_within_bounds(phi, place, prime, m):
    upper, lower = torsion_valuation_bounds(phi, place, prime, m)
    pg = torsion_poly(phi, prime**m).newton_polygon(place)
    vals = [v for v, _ in pg.root_valuations()]
    assert all(lower <= v <= upper for v in vals)
    return vals


@pytest.mark.parametrize("q,text,place,prime,m", [
    (2, "t + tau", "t", "t", 2),
    (3, "t + tau", "t", "t", 2),
    (2, "t + tau + tau^2", "t", "t", 1),
    (2, "t + tau + tau^2", "t", "t+1", 2),
    (3, "t + (t+1)*tau + tau^2", "t", "t", 1),
])
def test_newton_slopes_within_bounds(q, text, place, prime, m):
    F = FIELDS[q]
    _slopes_within_bounds(module(text, q), PrimePlace.finite(parse_poly(place, F)), parse_poly(prime, F), m)


def test_bounds_bracket_reconstructed_stable_bad_module(F2):
    datum = TateDatum.from_text("q=2; phi_t = t + tau; place = t; gamma = t^-1")
    phi = reconstruct_phi(datum, precision=20)
    assert stable_model(phi, datum.place).kind == "stable-bad"
    vals = _slopes_within_bounds(phi, datum.place, PolyA.t(F2), 1)
    assert vals


def test_torsion_poly_text(F3):
    t = PolyA.t(F3)
    assert str(torsion_poly(DrinfeldModule.carlitz(F3), t**2)) == "X^9 + (t^3+t)*X^3 + t^2*X"
