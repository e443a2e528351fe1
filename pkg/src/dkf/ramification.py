"""Ramification filtrations of presented Galois extensions L = K_l(x), h(x) = 0.

Polynomials in X are coefficient tuples over F_q(t), constant term first.
Valuations on L come from the norm: for L/K_l totally ramified,
v_L(alpha(x)) = v_l(Res_X(h, alpha)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .drinfeld import DrinfeldModule, phi_of
from .errors import InconsistencyError, ResourceLimitError
from .polynomials import PolyA, PrimePlace, RationalFn, as_rational

DEFAULT_GROUP_CAP = 4096


# -- polynomials in X over F ----------------------------------------------------------


def _trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _add(a, b):
    if not a or not b:
        return _trim(a or b)
    n = max(len(a), len(b))
    zero = (a or b)[0] - (a or b)[0]
    return _trim([(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)])


def _neg(a):
    return tuple(-c for c in a)


def _mul(a, b):
    if not a or not b:
        return ()
    zero = a[0] - a[0]
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return _trim(out)


def _divmod(a, b):
    a = list(_trim(a))
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    inv = b[-1].inverse()
    zero = b[0] - b[0]
    quo = [zero] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        k = len(a) - len(b)
        quo[k] = c
        for i, y in enumerate(b):
            a[k + i] = a[k + i] - c * y
        a = list(_trim(a))
    return _trim(quo), tuple(a)


def _mod(a, h):
    return _divmod(a, h)[1]


def _compose_mod(g, y, h):
    """g(y) mod h by Horner."""
    acc = ()
    for c in reversed(g):
        acc = _mod(_mul(acc, y), h)
        if c:
            acc = _add(acc, (c,))
    return acc


def _derivative(a):
    return _trim([c * i for i, c in enumerate(a)][1:])


def resultant(f, g):
    """Res_X(f, g) over F_q(t) by the Euclidean recursion."""
    f, g = _trim(f), _trim(g)
    if not f or not g:
        return None
    n, m = len(f) - 1, len(g) - 1
    if n == 0:
        return f[0] ** m
    if m == 0:
        return g[0] ** n
    r = _divmod(g, f)[1]
    if not r:
        return f[0] - f[0]
    k = len(r) - 1
    # Res(f, g) = lc(f)^(m - k) Res(f, r);  Res(f, r) = (-1)^(n k) Res(r, f)
    sign = -1 if (n * k) % 2 else 1
    return f[-1] ** (m - k) * resultant(r, f) * sign


def format_xpoly(a, var="X"):
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        cs = str(c)
        if i and ("+" in cs or "-" in cs[1:] or "/" in cs):
            cs = f"({cs})"
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        else:
            parts.append(f"{cs}*{mono}")
    return "+".join(parts)


# -- presentations ------------------------------------------------------------------


def ext_valuation(alpha, h, place: PrimePlace) -> int:
    """v_L(alpha(x)) for L = K_l[X]/(h), h monic Eisenstein."""
    alpha = _mod(alpha, h)
    if not alpha:
        return math.inf
    res = resultant(h, alpha)
    return res.valuation(place)


def is_eisenstein(h, place: PrimePlace) -> bool:
    h = _trim(h)
    if len(h) < 2 or h[-1] != 1:
        return False
    if len(h) == 2:
        return True  # degree one: L = K_l
    if h[0].valuation(place) != 1:
        return False
    return all(c.valuation(place) >= 1 for c in h[1:-1])


@dataclass(frozen=True)
class GaloisPresentation:
    """L = K_l[X]/(h) with Galois group given by sigma(x) = g_sigma(x) mod h."""

    place: PrimePlace
    h: tuple
    elements: tuple  # g_sigma, each reduced mod h
    labels: tuple = ()

    def __post_init__(self):
        F = self.place.field
        h = _trim(as_rational(c, F) for c in self.h)
        object.__setattr__(self, "h", h)
        if not is_eisenstein(h, self.place):
            raise ValueError("only totally ramified presentations with Eisenstein h are supported")
        els = tuple(_mod(tuple(as_rational(c, F) for c in g), h) for g in self.elements)
        object.__setattr__(self, "elements", els)
        if len(set(els)) != len(els):
            raise ValueError("group elements are not distinct mod h")
        if len(els) != self.degree:
            raise ValueError(f"{len(els)} automorphisms for an extension of degree {self.degree}")
        for g in els:
            if _compose_mod(h, g, h):
                raise ValueError(f"{format_xpoly(g)} does not map x to a root of h")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(format_xpoly(g) for g in els))

    @property
    def degree(self):
        return len(self.h) - 1

    @property
    def order(self):
        return len(self.elements)

    def identity_index(self):
        x = self._x()
        return self.elements.index(_mod(x, self.h))

    def _x(self):
        F = self.place.field
        zero = RationalFn.from_poly(PolyA(F))
        one = RationalFn.from_poly(PolyA(F, [1]))
        return (zero, one)

    def compose(self, i, j):
        """Index of sigma_i o sigma_j, using sigma_i(g_j(x)) = g_j(g_i(x))."""
        g = _compose_mod(self.elements[j], self.elements[i], self.h)
        try:
            return self.elements.index(g)
        except ValueError:
            raise InconsistencyError("composition left the presented set; not a group") from None

    def group_table(self):
        n = self.order
        table = [[self.compose(i, j) for j in range(n)] for i in range(n)]
        e = self.identity_index()
        for i in range(n):
            if table[e][i] != i or table[i][e] != i:
                raise InconsistencyError("identity law fails")
            if e not in table[i]:
                raise InconsistencyError("missing inverse")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if table[table[i][j]][k] != table[i][table[j][k]]:
                        raise InconsistencyError("associativity fails")
        return table

    def to_json(self):
        return {
            "place": str(self.place),
            "h": [str(c) for c in self.h],
            "elements": [[str(c) for c in g] for g in self.elements],
        }


def conjugate_valuations(pres: GaloisPresentation, generator=None):
    """i(sigma) = v_L(sigma(y) - y) for each element (inf for the identity).

    ``generator`` is y as a polynomial in x (default x itself).
    """
    h = pres.h
    y = _mod(pres._x() if generator is None else tuple(generator), h)
    out = []
    for g in pres.elements:
        sy = _compose_mod(y, g, h)
        out.append(ext_valuation(_add(sy, _neg(y)), h, pres.place))
    return tuple(out)


@dataclass(frozen=True)
class Filtration:
    group_order: int
    orders: tuple  # |G_i| for i = -1, 0, 1, ..., until 1
    lower_breaks: tuple
    i_values: tuple

    def order_at(self, i) -> int:
        """|G_u| for real u >= -1 (G_u = G_ceil(u))."""
        k = math.ceil(i)
        if k <= -1:
            return self.group_order
        idx = k + 1
        return self.orders[idx] if idx < len(self.orders) else 1


def lower_filtration(pres: GaloisPresentation, generator=None) -> Filtration:
    iv = conjugate_valuations(pres, generator)
    finite = [i for i in iv if i != math.inf]
    top = max(finite, default=0)
    orders = [pres.order]
    for i in range(0, top + 1):
        orders.append(sum(1 for v in iv if v >= i + 1))
    if orders[-1] != 1:
        orders.append(1)
    breaks = tuple(sorted({v - 1 for v in finite}))
    return Filtration(pres.order, tuple(orders), breaks, iv)


@dataclass(frozen=True)
class HerbrandFn:
    """Piecewise-linear increasing function through ``points`` with ``final_slope`` beyond."""

    points: tuple  # ((x, y), ...) exact Fractions, first point (-1, -1)
    final_slope: Fraction

    def __call__(self, u):
        u = Fraction(u)
        if u < -1:
            raise ValueError("Herbrand functions are defined on [-1, oo)")
        pts = self.points
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            if u <= x2:
                return y1 + (u - x1) * (y2 - y1) / (x2 - x1)
        x, y = pts[-1]
        return y + (u - x) * self.final_slope

    def inverse(self) -> "HerbrandFn":
        return HerbrandFn(tuple((y, x) for x, y in self.points), 1 / self.final_slope)

    def slopes(self):
        out = [(y2 - y1) / (x2 - x1) for (x1, y1), (x2, y2) in zip(self.points, self.points[1:])]
        return out + [self.final_slope]


def herbrand_phi(f: Filtration) -> HerbrandFn:
    g0 = f.order_at(0)
    pts = [(Fraction(-1), Fraction(-1)), (Fraction(0), Fraction(0))]
    x, y = Fraction(0), Fraction(0)
    for b in f.lower_breaks:
        if b <= 0:
            continue
        # on (x, b] the group is G_ceil, constant = |G_b|
        y = y + (b - x) * Fraction(f.order_at(b), g0)
        x = Fraction(b)
        pts.append((x, y))
    return HerbrandFn(tuple(pts), Fraction(f.order_at(x + 1), g0))


def herbrand_psi(f: Filtration) -> HerbrandFn:
    return herbrand_phi(f).inverse()


def herbrand_phi_sum(f: Filtration, u) -> Fraction:
    """phi(u) = (1/g_0) sum_{sigma in G_0} min(i(sigma), u + 1) - 1 (independent formula)."""
    u = Fraction(u)
    g0 = f.order_at(0)
    tot = sum(u + 1 if i == math.inf else min(Fraction(i), u + 1) for i in f.i_values if i >= 1)
    return tot / g0 - 1


@dataclass(frozen=True)
class BreakReport:
    lower_breaks: tuple
    upper_breaks: tuple
    maximal_break: Fraction
    group_order: int
    tame_order: int
    wild_order: int

    def to_json(self):
        return {
            "group_order": self.group_order,
            "lower_breaks": [str(b) for b in self.lower_breaks],
            "maximal_break": str(self.maximal_break),
            "tame_order": self.tame_order,
            "upper_breaks": [str(b) for b in self.upper_breaks],
            "wild_order": self.wild_order,
        }


def break_report(pres: GaloisPresentation, generator=None) -> BreakReport:
    f = lower_filtration(pres, generator)
    phi = herbrand_phi(f)
    upper = tuple(phi(b) for b in f.lower_breaks)
    for b, ub in zip(f.lower_breaks, upper):
        if herbrand_phi_sum(f, b) != ub:
            raise InconsistencyError(f"Herbrand function disagrees with the conjugate sum at {b}")
    if f.group_order == 1:
        top = Fraction(-1)
    else:
        top = upper[-1]
    tame = f.order_at(0) // f.order_at(1)
    return BreakReport(tuple(Fraction(b) for b in f.lower_breaks), upper, top, f.group_order, tame, f.order_at(1))


def maximal_break(pres: GaloisPresentation) -> Fraction:
    """inf{u >= -1 : G^u = 1}: -1 for G = 1, else phi of the last lower break."""
    return break_report(pres).maximal_break


def different_exponent(pres: GaloisPresentation):
    """(v_L(h'(x)), sum_{sigma != 1} i(sigma)); the two agree for a uniformizer x."""
    direct = ext_valuation(_derivative(pres.h), pres.h, pres.place)
    via = sum(i for i in conjugate_valuations(pres) if i != math.inf)
    return direct, via


# -- Carlitz cyclotomic presentations ---------------------------------------------------


def _units_mod(field, pm: PolyA):
    out = []
    n = pm.degree
    q = field.size
    for k in range(q**n):
        digits = []
        for _ in range(n):
            k, d = divmod(k, q)
            digits.append(d)
        a = PolyA(field, digits)
        if a and a.gcd(pm).degree == 0:
            out.append(a)
    return out


def carlitz_local(field, prime: PolyA, m: int = 1, cap: int = DEFAULT_GROUP_CAP, verify: bool | None = None) -> GaloisPresentation:
    """K_p(C[p^m]) at l = p, with h = C_{p^m}(X)/C_{p^(m-1)}(X)."""
    if m < 1:
        raise ValueError("level must be positive")
    if not prime.is_monic or not prime.is_irreducible():
        raise ValueError(f"{prime} is not a monic irreducible polynomial")
    q, d = field.size, prime.degree
    order = q ** ((m - 1) * d) * (q**d - 1)
    if order > cap:
        raise ResourceLimitError(f"group order {order} exceeds cap {cap}")
    C = DrinfeldModule.carlitz(field)
    place = PrimePlace.finite(prime)

    def dense(a):
        f = phi_of(C, a)
        zero = RationalFn.from_poly(PolyA(field))
        out = [zero] * (q ** f.degree + 1)
        for i, c in enumerate(f.coeffs):
            out[q**i] = c
        return tuple(out)

    top = dense(prime**m)
    below = dense(prime ** (m - 1))
    h, rem = _divmod(top, below)
    if rem:
        raise InconsistencyError("C_{p^(m-1)} does not divide C_{p^m}")
    pm = prime**m
    units = _units_mod(field, pm)
    els = tuple(_mod(dense(a), h) for a in units)
    pres = GaloisPresentation(place, h, els, tuple(str(a) for a in units))
    if verify if verify is not None else order <= 64:
        pres.group_table()
    return pres


__all__ = [
    "BreakReport",
    "Filtration",
    "GaloisPresentation",
    "HerbrandFn",
    "break_report",
    "carlitz_local",
    "conjugate_valuations",
    "different_exponent",
    "ext_valuation",
    "format_xpoly",
    "herbrand_phi",
    "herbrand_phi_sum",
    "herbrand_psi",
    "is_eisenstein",
    "lower_filtration",
    "maximal_break",
    "resultant",
]
