"""Closed-form break bounds in exact arithmetic, and a certifier comparing them with exact breaks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .drinfeld import DrinfeldModule, stable_model, torsion_poly
from .errors import ResourceLimitError
from .lattice import NormValue
from .local import valuation
from .polynomials import PolyA, PrimePlace, RationalFn

DEFAULT_FACTORIAL_CAP = 5040
DEFAULT_PRECISION = 30


def _factorial(n: int, cap: int) -> int:
    if n > cap:
        raise ResourceLimitError(f"{n}! exceeds the factorial cap {cap}")
    return math.factorial(n)


def obvious_e_bound(q: int, r: int, degpm: int, cap: int = DEFAULT_FACTORIAL_CAP) -> int:
    """(q^(r deg p^m))!: L is generated by that many torsion points."""
    if q < 2 or r < 1 or degpm < 1:
        raise ValueError("q >= 2, r >= 1 and deg(p^m) >= 1 required")
    return _factorial(q ** (r * degpm), cap)


def cprime(q: int, r: int, cap: int = DEFAULT_FACTORIAL_CAP) -> int:
    """C' = (q^r - 1)!."""
    if q < 2 or r < 1:
        raise ValueError("q >= 2 and r >= 1 required")
    return _factorial(q**r - 1, cap)


def prop1_break_bound(q: int, r_phi: int, v_pm, v_a, degpm: int, e) -> Fraction:
    """e (v(p^m)/(q-1) + v(a(p^m))/(q^(r deg p^m - 1)(q-1)) + 1) - 1."""
    v_pm, v_a, e = Fraction(v_pm), Fraction(v_a), Fraction(e)
    if v_pm < 0 or v_a < 0:
        raise ValueError("negative valuation: the model is not integral (twist to the stable model first)")
    if e < 1:
        raise ValueError("ramification index must be >= 1")
    return e * (v_pm / (q - 1) + v_a / (q ** (r_phi * degpm - 1) * (q - 1)) + 1) - 1


def _as_int_cap(N) -> int | Fraction:
    """N as an exact rational when possible, else its ceiling (a valid upper bound)."""
    if isinstance(N, NormValue):
        f = N.as_fraction()
        return f if f is not None else Fraction(N.ceil())
    return Fraction(N)


def prop2_leading_bound(q: int, r_phi: int, degpm: int, v_pm, N, Cp: int) -> Fraction:
    """v(p^m) + q^(r deg p^m - 1) N^r C'^((r+1)(r-2)), bounding v(a(p^m))."""
    N = _as_int_cap(N)
    if N < 1 or Cp < 1:
        raise ValueError("N >= 1 and C' >= 1 required")
    ex = (r_phi + 1) * (r_phi - 2)
    cp = Fraction(Cp) ** ex
    return Fraction(v_pm) + Fraction(q) ** (r_phi * degpm - 1) * N**r_phi * cp


def gardeyn_different_bound(minima, vals, q: int) -> Fraction:
    """1 + 2 sum_i q^(i-1) v(gamma_1/gamma_i) prod_{j<=i} c_i/c_j.

    Irrational products are rounded up termwise, which keeps the bound valid
    because every v(gamma_1/gamma_i) >= 0.
    """
    minima = [NormValue.coerce(c) for c in minima]
    if len(minima) != len(vals) or not minima:
        raise ValueError("need one valuation per minimum")
    roots = {c.root for c in minima}
    if len(roots) != 1:
        raise ValueError(f"inconsistent norm root indices {sorted(roots)}")
    total = Fraction(0)
    for i in range(1, len(minima) + 1):
        v = Fraction(vals[i - 1])
        if v < 0:
            raise ValueError("v(gamma_1/gamma_i) must be nonnegative for an ordered basis")
        if v == 0:
            continue
        prod = NormValue(1)
        for j in range(1, i + 1):
            prod = prod * (minima[i - 1] / minima[j - 1])
        term = prod * (Fraction(q) ** (i - 1) * v)
        exact = term.as_fraction()
        total += exact if exact is not None else term.ceil()
    return 1 + 2 * total


def _ceil_quarter_exponent(r: int):
    num = (r - 1) ** 2
    return num // 4 if num % 4 == 0 else -(-num // 4)


def mythm_e_bound(q: int, r: int, N, cap: int = DEFAULT_FACTORIAL_CAP) -> int:
    """2 + 4 q^(r-2) C'^(r(r-2)) N^(r-1); 2 for r = 1."""
    if r == 1:
        return 2
    if r < 1:
        raise ValueError("rank must be positive")
    N = _as_int_cap(N)
    if N < 1:
        raise ValueError("N >= 1 required")
    val = 2 + 4 * Fraction(q) ** (r - 2) * Fraction(cprime(q, r, cap)) ** (r * (r - 2)) * N ** (r - 1)
    return math.ceil(val)


def mythm_break_bound(q: int, r: int, N, cap: int = DEFAULT_FACTORIAL_CAP) -> int:
    """e_bound (C'^((r-1)^2/4) N^r + 1) - 1 with the exponent rounded up when fractional."""
    if r < 2:
        raise ValueError("the break bound needs r >= 2")
    N = _as_int_cap(N)
    cp = cprime(q, r, cap)
    inner = Fraction(cp) ** _ceil_quarter_exponent(r) * N**r + 1
    return math.ceil(mythm_e_bound(q, r, N, cap) * inner - 1)


def mythm_exponent_rounded(r: int) -> bool:
    return (r - 1) ** 2 % 4 != 0


def tame_basechange_break_bound(u, d: int) -> Fraction:
    u = Fraction(u)
    if u < -1 or d < 1:
        raise ValueError("u >= -1 and d >= 1 required")
    return Fraction(-1) if u == -1 else d * u


# -- certification --------------------------------------------------------------------


@dataclass(frozen=True)
class CertificationProfile:
    r: int
    N: dict = field(default_factory=dict)  # PrimePlace -> covolume cap
    m: dict = field(default_factory=dict)  # PolyA prime -> level

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("rank cap must be >= 1")
        if any(n < 1 for n in self.N.values()):
            raise ValueError("covolume caps must be >= 1")
        if any(k < 0 for k in self.m.values()):
            raise ValueError("torsion levels must be >= 0")

    def cap_at(self, place):
        return self.N.get(place)


@dataclass(frozen=True)
class BoundReport:
    input: dict
    v_pm: int
    v_a: tuple  # (value, provenance)
    e: tuple  # (value, provenance)
    prop1_bound: Fraction
    prop2_bound: Fraction | None
    mythm_e_bound: int | None
    mythm_break_bound: int | None
    exact_break: Fraction | None
    checks: tuple  # ((name, lhs, rhs, holds), ...)
    notes: tuple = ()

    @property
    def verdict(self) -> bool:
        return all(ok for *_, ok in self.checks)

    def to_json(self):
        def num(x):
            return None if x is None else str(x)

        return {
            "checks": [{"holds": ok, "lhs": str(a), "name": n, "rhs": str(b)} for n, a, b, ok in self.checks],
            "e": {"provenance": self.e[1], "value": str(self.e[0])},
            "exact_break": "not computed" if self.exact_break is None else str(self.exact_break),
            "input": self.input,
            "mythm_break_bound": num(self.mythm_break_bound),
            "mythm_e_bound": num(self.mythm_e_bound),
            "notes": list(self.notes),
            "prop1_bound": str(self.prop1_bound),
            "prop2_bound": num(self.prop2_bound),
            "v_a": {"provenance": self.v_a[1], "value": str(self.v_a[0])},
            "v_pm": self.v_pm,
            "verdict": self.verdict,
        }


def _is_carlitz(phi: DrinfeldModule) -> bool:
    return phi.rank == 1 and phi.coeffs[1] == RationalFn.from_poly(PolyA(phi.field, [1]))


def certify(target, place: PrimePlace, prime: PolyA, m: int, profile: CertificationProfile, precision: int = DEFAULT_PRECISION, cap: int = DEFAULT_FACTORIAL_CAP) -> BoundReport:
    """Assemble every applicable bound for the maximal break of K_l(phi[p^m]) / K_l."""
    from .ramification import break_report, carlitz_local
    from .tate import TateDatum, covolume_of_phi, reconstruct_phi

    pm = prime**m
    degpm = pm.degree
    if degpm < 1:
        raise ValueError("p^m must be a nonunit")
    checks, notes = [], []
    exact = None
    prop2 = None
    if isinstance(target, TateDatum):
        datum = target
        place = datum.place
        phi = reconstruct_phi(datum, precision)
        q, r_phi = phi.q, phi.rank
        info = {"kind": "tate", "datum": f"{datum.psi}; place = {place}; gamma = {datum.gamma}", "prime": str(prime), "m": m}
        ex = r_phi * degpm == datum.r_psi * degpm + 1 * degpm
        checks.append(("exact sequence rank identity", r_phi * degpm, datum.r_psi * degpm + degpm, ex))
        D = covolume_of_phi(datum)
        N = profile.cap_at(place)
        if N is None:
            N = D.ceil()
            notes.append(f"N at {place} taken as ceil(D(phi)) = {N}")
        elif NormValue.coerce(N) < D:
            raise ValueError(f"D(phi, {place}) = {D} exceeds the profile cap N = {N}")
        f = torsion_poly(phi, pm)
        v_a = f.leading.valuation
        v_a_prov = "computed from reconstructed phi"
        prop2 = prop2_leading_bound(q, r_phi, degpm, valuation(pm, place), N, cprime(q, r_phi, cap))
        checks.append(("v(a(p^m)) <= prop2 bound", v_a, prop2, v_a <= prop2))
        e_candidates = [(obvious_e_bound(q, r_phi, degpm, cap), "obvious bound")]
        if r_phi >= 2:
            e_candidates.append((mythm_e_bound(q, r_phi, N, cap), "mythm bound"))
        e_val, e_prov = min(e_candidates)
    else:
        phi = target
        q, r_phi = phi.q, phi.rank
        info = {"kind": "drinfeld", "module": str(phi), "place": str(place), "prime": str(prime), "m": m}
        red = stable_model(phi, place)
        if red.mu != 0:
            raise ValueError(f"phi is not in stable normal form at {place} (mu = {red.mu})")
        N = profile.cap_at(place) or 1
        f = torsion_poly(phi, pm)
        v_a = valuation(f.leading, place)
        v_a_prov = "computed from torsion polynomial"
        if _is_carlitz(phi) and place.generator == prime:
            rep = break_report(carlitz_local(phi.field, prime, m))
            exact = rep.maximal_break
            e_val, e_prov = rep.group_order, "exact (Carlitz presentation)"
        else:
            e_val, e_prov = obvious_e_bound(q, r_phi, degpm, cap), "obvious bound"
    v_pm = valuation(pm, place)
    p1 = prop1_break_bound(q, r_phi, v_pm, v_a, degpm, e_val)
    r_cap = max(profile.r, r_phi)
    me = mythm_e_bound(q, r_cap, N, cap)
    mb = mythm_break_bound(q, r_cap, N, cap) if r_cap >= 2 else None
    if r_cap >= 2 and mythm_exponent_rounded(r_cap):
        notes.append(f"C' exponent (r-1)^2/4 = {Fraction((r_cap - 1) ** 2, 4)} rounded up to {_ceil_quarter_exponent(r_cap)}")
    if exact is not None:
        checks.append(("exact break <= prop1 bound", exact, p1, exact <= p1))
        ob = obvious_e_bound(q, r_phi, degpm, cap)
        p1o = prop1_break_bound(q, r_phi, v_pm, v_a, degpm, ob)
        checks.append(("exact break <= prop1 bound with obvious e", exact, p1o, exact <= p1o))
    else:
        notes.append("exact break not computed: no explicit presentation for this extension")
    return BoundReport(info, v_pm, (v_a, v_a_prov), (e_val, e_prov), p1, prop2, me, mb, exact, tuple(checks), tuple(notes))


__all__ = [
    "BoundReport",
    "CertificationProfile",
    "certify",
    "cprime",
    "gardeyn_different_bound",
    "mythm_break_bound",
    "mythm_e_bound",
    "obvious_e_bound",
    "prop1_break_bound",
    "prop2_leading_bound",
    "tame_basechange_break_bound",
]
