"""Drinfeld A-modules phi over F_q(t) or a completion K_l, given by phi_t."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .fields import FiniteField
from .local import complete, newton_polygon, valuation
from .ore import OrePoly
from .parsing import field_for_q, parse_key_values, parse_ore
from .polynomials import PolyA, PrimePlace, RationalFn, as_rational, tame_lcm_d


@dataclass(frozen=True)
class DrinfeldModule:
    """phi_t = g_0 + g_1 tau + ... + g_r tau^r with g_0 = t, g_r != 0.

    ``place`` is None for a module over F_q(t) (RationalFn coefficients),
    otherwise the coefficients are LocalElem at that place.
    """

    field: FiniteField
    coeffs: tuple
    place: PrimePlace | None = None
    precision: int | None = None

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if self.place is None:
            coeffs = tuple(as_rational(c, self.field) for c in coeffs)
            t = RationalFn.from_poly(PolyA.t(self.field))
            if not coeffs or coeffs[0] != t:
                raise ValueError("phi_t must have constant term t (generic characteristic)")
        else:
            t = complete(PolyA.t(self.field), self.place, self.precision)
            if not coeffs or not coeffs[0].agrees_with(t):
                raise ValueError("phi_t must have constant term t (generic characteristic)")
        if len(coeffs) < 2 or not coeffs[-1]:
            raise ValueError("leading coefficient of phi_t must be nonzero and rank >= 1")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def carlitz(cls, field):
        t = RationalFn.from_poly(PolyA.t(field))
        return cls(field, (t, RationalFn.from_poly(PolyA(field, [1]))))

    @classmethod
    def from_text(cls, line: str, field: FiniteField | None = None, header: str | None = None):
        """``q=3; r=2; phi_t = t + (t+1)*tau + t^2*tau^2``."""
        kv = parse_key_values(line)
        if "phi_t" not in kv:
            raise ParseError("missing 'phi_t = ...'", line, len(line))
        if field is None:
            if "q" not in kv:
                raise ParseError("missing 'q=...'", line, 0)
            qs, col = kv["q"]
            try:
                field = field_for_q(int(qs), header)
            except ValueError as exc:
                raise ParseError(str(exc), line, col) from None
        text, col = kv["phi_t"]
        try:
            f = parse_ore(text, field)
        except ParseError as exc:
            raise ParseError(exc.args[0].splitlines()[0].rsplit(" at column", 1)[0], line, col + (exc.position or 0)) from None
        if "r" in kv:
            rs, rcol = kv["r"]
            if not rs.isdigit() or int(rs) != f.degree:
                raise ParseError(f"declared rank {rs} but phi_t has tau-degree {f.degree}", line, rcol)
        try:
            return cls(field, f.coeffs)
        except ValueError as exc:
            raise ParseError(str(exc), line, col) from None

    @property
    def q(self):
        return self.field.size

    @property
    def rank(self):
        return len(self.coeffs) - 1

    @property
    def phi_t(self) -> OrePoly:
        return OrePoly(self.coeffs, self.q)

    def scalar(self, a):
        """Embed an element of F_q(t) into the coefficient domain."""
        if self.place is None:
            return as_rational(a, self.field)
        return complete(a, self.place, self.precision)

    def localize(self, place: PrimePlace, precision=None) -> "DrinfeldModule":
        if self.place is not None:
            raise ValueError("module is already local")
        return DrinfeldModule(self.field, tuple(complete(c, place, precision) for c in self.coeffs), place, precision)

    def __str__(self):
        return f"q={self.q}; r={self.rank}; phi_t = {self.phi_t}"


def phi_of(phi: DrinfeldModule, a) -> OrePoly:
    """phi_a = sum a_i phi_t^i by Horner's rule in the Ore ring."""
    a = _as_poly(a, phi.field)
    if not a:
        raise ValueError("phi_a needs a nonzero operand")
    pt = phi.phi_t
    acc = OrePoly([phi.scalar(PolyA(phi.field, [a.lc]))], phi.q)
    for c in reversed(a.coeffs[:-1]):
        acc = acc.mul(pt)
        if c:
            acc = acc + OrePoly([phi.scalar(PolyA(phi.field, [c]))], phi.q)
    return acc


def _as_poly(a, field):
    if isinstance(a, PolyA):
        return a
    if isinstance(a, RationalFn) and a.is_polynomial():
        return a.num
    if isinstance(a, int):
        return PolyA(field, [field.from_int(a)])
    raise TypeError(f"expected an element of A, got {a!r}")


@dataclass(frozen=True)
class TorsionPolynomial:
    """phi_a(X) = sum_i coeffs[i] X^(q^i)."""

    operand: PolyA
    coeffs: tuple
    q: int

    @property
    def degree(self):
        """Degree in X."""
        return self.q ** (len(self.coeffs) - 1)

    @property
    def leading(self):
        """a(p^m): the top coefficient."""
        return self.coeffs[-1]

    @property
    def initial(self):
        return self.coeffs[0]

    def exponents(self):
        return [self.q**i for i in range(len(self.coeffs))]

    def dense(self, zero):
        """Coefficient list indexed by X-degree."""
        out = [zero] * (self.degree + 1)
        for i, c in enumerate(self.coeffs):
            out[self.q**i] = c
        return out

    def __call__(self, x):
        return OrePoly(self.coeffs, self.q)(x)

    def __str__(self):
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            mono = "X" if i == 0 else f"X^{self.q**i}"
            text = str(c)
            if text == "1":
                terms.append(mono)
            else:
                terms.append(f"({text})*{mono}" if any(ch in text for ch in "+-/") else f"{text}*{mono}")
        return " + ".join(terms) or "0"

    def newton_polygon(self, place: PrimePlace):
        pts = [(self.q**i, valuation(c, place)) for i, c in enumerate(self.coeffs) if c]
        return newton_polygon(pts)


def torsion_poly(phi: DrinfeldModule, a) -> TorsionPolynomial:
    f = phi_of(phi, a)
    return TorsionPolynomial(_as_poly(a, phi.field), f.coeffs, phi.q)


@dataclass(frozen=True)
class ReductionData:
    place: PrimePlace
    mu: Fraction
    r_psi: int
    kind: str  # "good" | "stable-bad" | "potentially-stable"
    tame_degree: int
    twisted_valuations: tuple  # v(g_i) - (q^i - 1) mu, i = 1..r (None for g_i = 0)


def stable_model(phi: DrinfeldModule, place: PrimePlace) -> ReductionData:
    """Canonical twist slope mu = min_i v(g_i)/(q^i - 1) and reduction rank.

    Twisting by c with v(c) = -mu makes all coefficients integral with a unit
    among them; this is possible over K_l itself iff mu is an integer.
    """
    if place.is_infinite:
        raise ValueError("stable_model needs a finite place")
    q, r = phi.q, phi.rank
    vals = []
    for i, g in enumerate(phi.coeffs[1:], start=1):
        vals.append(None if not g else valuation(g, place))
    mu = min(Fraction(v, q**i - 1) for i, v in enumerate(vals, start=1) if v is not None)
    twisted = tuple(None if v is None else Fraction(v) - (q**i - 1) * mu for i, v in enumerate(vals, start=1))
    r_psi = max(i for i, w in enumerate(twisted, start=1) if w == 0)
    tame = mu.denominator
    if tame != 1:
        kind = "potentially-stable"
    elif r_psi == r:
        kind = "good"
    else:
        kind = "stable-bad"
    assert tame_lcm_d(q, r) % tame == 0
    return ReductionData(place, mu, r_psi, kind, tame, twisted)


def torsion_valuation_bounds(phi: DrinfeldModule, place: PrimePlace, prime: PolyA, m: int):
    """(upper, lower) bounds on v_l of nonzero p^m-torsion from the Newton polygon."""
    if m < 1:
        raise ValueError("torsion level must be positive")
    for g in phi.coeffs:
        if g and valuation(g, place) < 0:
            raise ValueError(f"phi is not {place}-integral; run stable_model and twist first")
    pm = prime**m
    if place.is_infinite:
        raise ValueError("bounds are stated at finite places")
    f = torsion_poly(phi, pm)
    q, r = phi.q, phi.rank
    v_pm = valuation(pm, place)
    v_a = valuation(f.leading, place)
    upper = Fraction(v_pm, q - 1)
    lower = Fraction(-v_a, q ** (r * pm.degree - 1) * (q - 1))
    return upper, lower


__all__ = [
    "DrinfeldModule",
    "ReductionData",
    "TorsionPolynomial",
    "phi_of",
    "stable_model",
    "torsion_poly",
    "torsion_valuation_bounds",
]
