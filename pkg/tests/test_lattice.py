import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dkf import AmbientLattice, NormValue, PolyA, RationalFn, covolume, gardeyn_norm, is_smb, last_minimum_bound, reduce_basis, successive_minima
from dkf.errors import ParseError
from dkf.lattice import change_of_basis, vector_degree

from conftest import FIELDS
from oracles import det_Fpt, from_dkf, minima_by_enumeration, minima_by_kernel, pdeg


def lattice(text, q=2):
    return AmbientLattice.from_text(text, FIELDS[q])


def int_columns(L):
    return [[from_dkf(x) for x in c] for c in L.columns]


def random_lattice(rng, q, r, n, max_deg=3):
    F = FIELDS[q]
    while True:
        rows = [[PolyA(F, [rng.randrange(q) for _ in range(rng.randint(0, max_deg) + 1)]) for _ in range(r)] for _ in range(n)]
        try:
            return AmbientLattice.from_rows(F, rows)
        except ValueError:
            continue


def test_identity_and_diagonal():
    sm = reduce_basis(lattice("1, 0; 0, 1"))
    assert sm.exponents == (0, 0)
    assert sm.basis == lattice("1, 0; 0, 1").columns
    assert reduce_basis(lattice("t^2, 0; 0, 1")).exponents == (0, 2)
    assert successive_minima(lattice("t^2, 0; 0, 1")) == (NormValue(1), NormValue(4))


def test_witness_for_skew_basis():
    L = lattice("t, t+1; 1, 1")
    sm = reduce_basis(L)
    assert sm.exponents == (0, 0)
    assert [[str(x) for x in v] for v in sm.basis] == [["1", "0"], ["0", "1"]]
    assert minima_by_enumeration(int_columns(L), 2) == [0, 0]


def test_is_smb_examples():
    L = lattice("t, t+1; 1, 1")
    assert is_smb(L, reduce_basis(L).basis)
    assert not is_smb(L, L.columns)
    single = lattice("t^2+1; t")
    assert is_smb(single, single.columns)
    with pytest.raises(ValueError):
        is_smb(L, [(RationalFn.from_poly(PolyA.t(FIELDS[2])), RationalFn.from_poly(PolyA(FIELDS[2], [])))] * 2)


def test_covolume_examples():
    q = Fraction(2)
    assert covolume([NormValue(1), NormValue(q**2)]) == NormValue(4)
    assert covolume(successive_minima(lattice("t, t+1; 1, 1"))) == NormValue(1)
    assert covolume([NormValue(3, 1)]) == NormValue(3)


def test_last_minimum_bound_examples():
    assert last_minimum_bound(NormValue(1), NormValue(4), 2) == NormValue(4)
    assert last_minimum_bound(1, 1, 5) == NormValue(1)
    assert last_minimum_bound(NormValue(Fraction(1, 2)), NormValue(2), 3) == NormValue(8)


def test_gardeyn_norm_examples(F2):
    from dkf import PrimePlace, complete
    from dkf.parsing import parse_rational

    P = PrimePlace.finite(PolyA.t(F2))
    assert gardeyn_norm(parse_rational("t^-3", F2), 1, P) == NormValue(3)
    g = gardeyn_norm(complete(parse_rational("t^-8", F2), P), 3)
    assert g.to_json() == ["8", 3] and g == NormValue(2)
    with pytest.raises(ValueError):
        gardeyn_norm(parse_rational("t+1", F2), 1, P)


def test_norm_value_exact_comparisons():
    assert NormValue(8, 2) > NormValue(2) and NormValue(8, 2) < NormValue(3)
    assert NormValue(8, 2) ** 2 == NormValue(8)
    assert NormValue(8, 3) == NormValue(2) and hash(NormValue(8, 3)) == hash(NormValue(2))
    assert NormValue(8, 2).ceil() == 3 and NormValue(9, 2).ceil() == 3
    assert NormValue(2, 2).as_fraction() is None
    with pytest.raises(ValueError):
        NormValue(0)


def test_from_text_reports_column():
    with pytest.raises(ParseError) as exc:
        lattice("t, t+1; 1, t^^2")
    assert exc.value.position == 13
    with pytest.raises(ParseError):
        lattice("t, 1; 1")
    with pytest.raises(ValueError):
        lattice("t, t; 1, 1")


@pytest.mark.parametrize("seed", range(12))
def test_minima_agree_with_enumeration(seed):
    rng = random.Random(seed)
    q, r = (2, 2) if seed % 3 else (3, 1)
    L = random_lattice(rng, q, r, r + seed % 2)
    assert list(reduce_basis(L).exponents) == minima_by_enumeration(int_columns(L), q, 3 if q == 2 else 4)


@pytest.mark.parametrize("seed", range(40))
def test_minima_agree_with_kernel_oracle(seed):
    rng = random.Random(1000 + seed)
    q = (2, 3)[seed % 2]
    r = 1 + seed % 3
    n = r + (seed // 3) % 2
    L = random_lattice(rng, q, r, n)
    sm = reduce_basis(L)
    assert list(sm.exponents) == minima_by_kernel(int_columns(L), q)
    assert change_of_basis(L, sm.basis) is not None
    assert [L.norm(v) for v in sm.basis] == list(sm.minima)
    assert list(sm.minima) == sorted(sm.minima)
    if n == r:
        det = det_Fpt([[from_dkf(x) for x in row] for row in L.rows()], q)
        assert covolume(sm.minima) == NormValue(Fraction(q) ** pdeg(det))
    assert last_minimum_bound(sm.minima[0], covolume(sm.minima), r) >= sm.minima[-1]


@given(st.data())
def test_max_property(data):
    seed = data.draw(st.integers(0, 10**6))
    rng = random.Random(seed)
    q = data.draw(st.sampled_from([2, 3]))
    r = data.draw(st.integers(1, 3))
    L = random_lattice(rng, q, r, r)
    sm = reduce_basis(L)
    F = FIELDS[q]
    coeffs = [PolyA(F, data.draw(st.lists(st.integers(0, q - 1), max_size=4))) for _ in range(r)]
    if not any(coeffs):
        return
    v = AmbientLattice(F, sm.basis).combine(coeffs)
    lhs = vector_degree(v)
    rhs = max(a.degree + d for a, d in zip(coeffs, sm.exponents) if a)
    assert lhs == rhs


def test_reduction_is_deterministic():
    rng = random.Random(7)
    L = random_lattice(rng, 3, 3, 3)
    assert reduce_basis(L) == reduce_basis(AmbientLattice(L.field, L.columns))
