from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from dkf import DrinfeldModule, LocalElem, PolyA, PrimePlace, RationalFn, complete, local_eval_additive, newton_polygon, roots_in_completion, torsion_poly, valuation
from dkf.errors import PrecisionError
from dkf.local import local_from_text, residue_root, t_expansion
from dkf.parsing import parse_poly, parse_rational

from conftest import FIELDS, polys


def place(F, text="t"):
    return PrimePlace.finite(parse_poly(text, F))


def test_geometric_series(F2):
    x = complete(parse_rational("1/(1-t)", F2), place(F2), 4)
    assert x.valuation == 0 and x.prec == 4
    assert [x.coefficient(n) for n in range(4)] == [1, 1, 1, 1]
    with pytest.raises(PrecisionError):
        x.coefficient(4)


def test_inverse_t(F3):
    x = complete(parse_rational("1/t", F3), place(F3), 3)
    assert x.valuation == -1 and x.prec == 3
    assert [x.coefficient(n) for n in range(-1, 3)] == [1, 0, 0, 0]


def test_expansion_at_degree_two_place(F2):
    P = place(F2, "t^2+t+1")
    T = complete(PolyA.t(F2), P, 2)
    assert T.valuation == 0
    alpha = T.coefficient(0)
    R = T.field
    assert alpha == residue_root(P)
    # alpha is a root of the place generator in the residue field F_4
    assert R.add(R.add(R.mul(alpha, alpha), alpha), 1) == 0
    # re-substitution: g(T) equals the uniformizer to precision
    for prec in (2, 10, 25):
        T = t_expansion(P, prec)
        g_T = P.generator(T)
        assert g_T.agrees_with(LocalElem.monomial(P, 1), prec)


def test_newton_examples(F2, F3):
    pg = newton_polygon([(1, 1), (2, 0)])
    assert pg.segments == ((Fraction(-1), 1),)
    assert pg.root_valuations() == ((1, 1),)
    pg = newton_polygon([(1, 1), (3, 0)])
    assert pg.segments == ((Fraction(-1, 2), 2),)
    pg = newton_polygon([(1, 0), (2, 0), (4, 0)])
    assert pg.segments == ((0, 3),)
    with pytest.raises(ValueError):
        newton_polygon([(1, 0)])


@given(st.lists(st.tuples(st.integers(0, 30), st.integers(-5, 20)), min_size=2, max_size=12))
def test_newton_polygon_is_convex(points):
    assume(len({x for x, _ in points}) >= 2)
    pg = newton_polygon(points)
    slopes = [s for s, _ in pg.segments]
    assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)
    xs = [x for x, _ in pg.vertices]
    assert xs == sorted(set(xs))
    assert sum(n for _, n in pg.segments) == xs[-1] - xs[0] == max(x for x, _ in points) - min(x for x, _ in points)
    # every point lies on or above the hull
    for x, y in points:
        for (x1, y1), (x2, y2) in zip(pg.vertices, pg.vertices[1:]):
            if x1 <= x <= x2:
                assert Fraction(y) >= y1 + Fraction(y2 - y1, x2 - x1) * (x - x1)


def test_additive_evaluation(F2):
    P = place(F2)
    x = complete(PolyA.t(F2), P)
    f = torsion_poly(DrinfeldModule.carlitz(F2), PolyA.t(F2))
    out = local_eval_additive(f, x)
    assert not out and out.is_exact
    ident = torsion_poly(DrinfeldModule.carlitz(F2), PolyA(F2, [1]))
    assert local_eval_additive(ident, x) == x


def test_half_integral_valuations_are_rejected(F3):
    with pytest.raises(TypeError):
        LocalElem(place(F3), Fraction(1, 2), (1,))


def test_rational_roots_by_hensel(F2):
    # X^2 + t X = X (X + t): roots 0 and t, Hensel-lifted
    P = place(F2)
    coeffs = [LocalElem.zero(P), complete(PolyA.t(F2), P, 20), LocalElem(P, 0, (1,))]
    roots = roots_in_completion(coeffs, P, 20)
    assert sorted(r.valuation for r in roots if r) == [1]


def _local_elements(F, P):
    coeff = st.lists(st.integers(0, F.size - 1), min_size=1, max_size=6)
    return st.builds(lambda s, c: LocalElem(P, s, c, 12 + s), st.integers(-3, 3), coeff).filter(bool)


@given(st.data())
def test_valuation_axioms(data):
    F = FIELDS[data.draw(st.sampled_from([2, 3]))]
    P = place(F)
    x = data.draw(_local_elements(F, P))
    y = data.draw(_local_elements(F, P))
    assert (x * y).valuation == x.valuation + y.valuation
    s = x + y
    if s:
        assert s.valuation >= min(x.valuation, y.valuation)
        if x.valuation != y.valuation:
            assert s.valuation == min(x.valuation, y.valuation)
    # the inverse is only as precise as x, whose leading digits may be zeros
    inv = x.inverse(8)
    assert (x * inv - 1).valuation >= min(8, x.relative_precision)


@given(st.data())
def test_completion_is_ring_homomorphism(data):
    q = data.draw(st.sampled_from([2, 3]))
    F = FIELDS[q]
    P = place(F, data.draw(st.sampled_from(["t", "t+1"] if q == 2 else ["t", "t+2"])))
    a, b = data.draw(polys(F, 3, nonzero=True)), data.draw(polys(F, 3, nonzero=True))
    c, d = data.draw(polys(F, 3, nonzero=True)), data.draw(polys(F, 3, nonzero=True))
    x, y = RationalFn(a, b), RationalFn(c, d)
    prec = 15
    for lhs, rhs in ((x + y, complete(x, P, prec) + complete(y, P, prec)), (x * y, complete(x, P, prec) * complete(y, P, prec))):
        if not lhs:
            continue
        got = complete(lhs, P, prec)
        assert got.agrees_with(rhs, min(prec, rhs.prec))
    assert valuation(x, P) == complete(x, P, prec).valuation


def test_completion_at_infinity(F3):
    inf = PrimePlace.infinity(F3)
    x = complete(parse_rational("t^2/(t+1)", F3), inf, 6)
    assert x.valuation == -1
    assert valuation(parse_rational("t^2/(t+1)", F3), inf) == -1


@pytest.mark.parametrize("text", ["1/(t^2+t+2)", "t^5+t", "(t+1)/t^3"])
def test_text_round_trip(text, F3):
    x = complete(parse_rational(text, F3), place(F3), 10)
    assert local_from_text(x.to_text(), F3) == x
