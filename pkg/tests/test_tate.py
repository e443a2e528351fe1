from fractions import Fraction

import pytest

from dkf import DrinfeldModule, NormValue, PolyA, PrimePlace, complete, covolume_of_phi, exp_series, functional_equation_defect, lattice_points, phi_of, product_formula_check, reconstruct_phi, stable_model
from dkf.errors import IrrationalRepresentativeError, ParseError
from dkf.parsing import parse_poly, parse_rational
from dkf.tate import MARGIN, TateDatum, _representatives

P = 24


@pytest.fixture(scope="module")
def carlitz2():
    return TateDatum.from_text("q=2; phi_t = t + tau; place = t; gamma = t^-1")


@pytest.fixture(scope="module")
def series2(carlitz2):
    return exp_series(carlitz2, 4, P)


def test_lattice_points_examples(carlitz2):
    F = carlitz2.psi.field
    pts = lattice_points(carlitz2, carlitz2.gamma_norm())
    assert pts == [complete(carlitz2.gamma, carlitz2.place)]
    pts = lattice_points(carlitz2, carlitz2.gamma_norm() * NormValue(2))
    assert len(pts) == 3 and sorted(p.valuation for p in pts) == [-2, -2, -1]
    t = PolyA.t(F)
    for a in (t, t + PolyA(F, [1])):
        assert complete(phi_of(carlitz2.psi, a)(carlitz2.gamma), carlitz2.place) in pts
    with pytest.raises(ValueError):
        lattice_points(carlitz2, NormValue(Fraction(1, 2)))


@pytest.mark.parametrize("text,r", [
    ("q=2; phi_t = t + tau; place = t; gamma = t^-1", 1),
    ("q=3; phi_t = t + tau; place = t; gamma = t^-2 + 1", 1),
    ("q=2; phi_t = t + (t+1)*tau + tau^2; place = t^3+t+1; gamma = (t^3+t+1)^-1", 2),
])
def test_valuation_law_on_lattice_points(text, r):
    datum = TateDatum.from_text(text)
    F = datum.psi.field
    for d in range(4):
        for a in (PolyA.monomial(F, d), PolyA.monomial(F, d) + PolyA(F, [1]) if d else PolyA(F, [1])):
            x = phi_of(datum.psi, a)(datum.gamma)
            assert x.valuation(datum.place) == datum.q ** (r * a.degree) * datum.v_gamma


def test_single_layer(carlitz2):
    e = exp_series(carlitz2, 3, 10, layers=1)
    t = complete(PolyA.t(carlitz2.psi.field), carlitz2.place, 10)
    assert e.coeffs[0] == complete(1, carlitz2.place, 10)
    assert e.coeffs[1].agrees_with(t) and e.coeffs[1].valuation == 1
    assert not e.coeffs[2] and not e.coeffs[3]


def test_series_is_stable_under_more_layers(carlitz2, series2):
    assert series2.coeffs[0].agrees_with(complete(1, carlitz2.place))
    more = exp_series(carlitz2, 4, P, layers=series2.layers + 3)
    assert all(a.agrees_with(b, P) for a, b in zip(series2.coeffs, more.coeffs))
    assert [b.valuation for b in series2.betas[:5]] == [1, 3, 11, 43, 171][: len(series2.betas[:5])]


def test_reconstruction(carlitz2, series2):
    phi = reconstruct_phi(carlitz2, P, series=series2)
    assert phi.rank == carlitz2.r_psi + 1
    red = stable_model(phi, carlitz2.place)
    assert red.r_psi == 1 and red.kind == "stable-bad"
    assert functional_equation_defect(carlitz2, phi, series2) >= P - MARGIN
    t2 = PolyA.t(carlitz2.psi.field) ** 2
    assert functional_equation_defect(carlitz2, phi, series2, t2) >= P - MARGIN


def test_reconstruction_rank_two_psi():
    datum = TateDatum.from_text("q=2; phi_t = t + (t+1)*tau + tau^2; place = t^3+t+1; gamma = (t^3+t+1)^-1")
    series = exp_series(datum, 5, 16)
    phi = reconstruct_phi(datum, 16, series=series)
    assert phi.rank == 3
    red = stable_model(phi, datum.place)
    assert red.r_psi == 2 and red.kind == "stable-bad"
    assert functional_equation_defect(datum, phi, series) >= 16 - MARGIN


def test_product_formula_seed_example(F2):
    t = PolyA.t(F2)
    place = PrimePlace.finite(t)
    datum = TateDatum.from_seed(DrinfeldModule.carlitz(F2), place, parse_rational("t^-1", F2), t, 1)
    assert datum.gamma == parse_rational("t^-2 + 1", F2)
    check = product_formula_check(datum, t, 1, P)
    assert check.representatives == 2 ** (2 * 1)
    assert check.defect >= P - MARGIN
    Z = _representatives(datum, t, 1, P)
    nonzero = [z for z in Z if z]
    assert len(nonzero) == 3
    expected = [parse_rational(x, F2) for x in ("t^-1", "t", "t^-1 + t")]
    for z, s in zip(sorted(nonzero, key=lambda z: z.valuation), sorted(expected, key=lambda s: s.valuation(place))):
        assert z.valuation == s.valuation(place)
    for z in nonzero:
        assert z.valuation >= Fraction(datum.v_gamma, datum.q**datum.r_psi)


def test_product_formula_guards(F3, carlitz2):
    t = PolyA.t(F3)
    place = PrimePlace.finite(t)
    datum = TateDatum.from_seed(DrinfeldModule.carlitz(F3), place, parse_rational("t^-1", F3), t, 1)
    with pytest.raises(IrrationalRepresentativeError):
        product_formula_check(datum, t, 1, 12)
    with pytest.raises(IrrationalRepresentativeError):
        product_formula_check(carlitz2, PolyA.t(carlitz2.psi.field), 1, 12)


def test_covolume_examples(F2):
    place = PrimePlace.finite(PolyA.t(F2))
    c = DrinfeldModule.carlitz(F2)
    assert covolume_of_phi(TateDatum(c, place, parse_rational("t^-1", F2))) == NormValue(1, 1)
    assert covolume_of_phi(TateDatum(c, place, parse_rational("t^-8", F2))) == NormValue(8, 1)
    rank2 = DrinfeldModule.from_text("q=2; phi_t = t + tau + tau^2")
    cov = covolume_of_phi(TateDatum(rank2, place, parse_rational("t^-8", F2)))
    assert cov.to_json() == ["8", 2] and NormValue(2) < cov < NormValue(3)


def test_datum_validation(F2):
    place = PrimePlace.finite(PolyA.t(F2))
    c = DrinfeldModule.carlitz(F2)
    with pytest.raises(ValueError):
        TateDatum(c, place, parse_rational("t+1", F2))
    with pytest.raises(ValueError):
        TateDatum(DrinfeldModule.from_text("q=2; phi_t = t + t*tau"), place, parse_rational("t^-1", F2))
    with pytest.raises(ParseError):
        TateDatum.from_text("q=2; phi_t = t + tau; place = t^2+1; gamma = t^-1")
    with pytest.raises(ParseError):
        TateDatum.from_text("q=2; phi_t = t + tau; place = t")
