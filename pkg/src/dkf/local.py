"""Completions of F_q(t) as truncated Laurent series in a uniformizer u.

At a finite place generated by g of degree d the model is F_{q^d}((u)) with
u = g(t); the residue field is F_q[t]/(g) and t expands as the unique series
T with g(T) = u and T = (class of t) mod u.  At infinity u = 1/t over F_q.

A :class:`LocalElem` knows its coefficients for exponents below ``prec``;
``prec == math.inf`` marks an exact Laurent polynomial.  Precision is
propagated pessimistically through every operation.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import IrrationalRepresentativeError, ParseError, PrecisionError
from .polynomials import PolyA, PrimePlace, RationalFn, as_rational

DEFAULT_PRECISION = 30
INF = math.inf


@functools.cache
def residue_field(place: PrimePlace):
    if place.degree == 1:
        return place.field
    return place.field.extension(place.generator.coeffs, "t")


def residue_root(place: PrimePlace) -> int:
    """The fixed root of the place generator in the residue field (class of t)."""
    if place.is_infinite:
        raise ValueError("infinity has no generator root")
    if place.degree == 1:
        F = place.field
        return F.neg(place.generator[0])
    return place.field.size  # digit vector (0, 1): the class of t


class LocalElem:
    """Truncated Laurent series sum_{n < prec} c_n u^n at a place."""

    __slots__ = ("place", "field", "start", "coeffs", "prec")

    def __init__(self, place: PrimePlace, start: int, coeffs, prec=INF):
        if not isinstance(start, int) or (prec != INF and not isinstance(prec, int)):
            raise TypeError("exponents and precision of a LocalElem must be integers")
        coeffs = list(coeffs)
        if prec != INF:
            coeffs = coeffs[: max(0, prec - start)]
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        coeffs = coeffs[lead:]
        start += lead
        if not coeffs:
            start = prec if prec != INF else 0
        self.place = place
        self.field = residue_field(place)
        self.start = start
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, place, prec=INF):
        return cls(place, 0, (), prec)

    @classmethod
    def monomial(cls, place, n, c=1, prec=INF):
        return cls(place, n, (c,), prec)

    def from_scalar(self, c):
        return LocalElem(self.place, 0, (c,))

    def _coerce(self, other):
        if isinstance(other, LocalElem):
            if other.place != self.place:
                raise TypeError(f"local elements at different places: {self.place} vs {other.place}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return LocalElem(self.place, 0, (self.field.from_int(other),))
        return NotImplemented

    # -- data ---------------------------------------------------------------

    @property
    def valuation(self):
        """Exact valuation, or the precision if the element is zero to precision."""
        if self.coeffs:
            return self.start
        return self.prec

    @property
    def is_exact(self):
        return self.prec == INF

    @property
    def relative_precision(self):
        return self.prec - self.valuation

    def __bool__(self):
        return bool(self.coeffs)

    def coefficient(self, n):
        if n >= self.prec:
            raise PrecisionError(f"coefficient of u^{n} unknown at precision {self.prec}")
        i = n - self.start
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def leading_coefficient(self):
        if not self.coeffs:
            raise PrecisionError("element is zero to precision")
        return self.coeffs[0]

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return LocalElem(self.place, self.start, self.coeffs, prec)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self.start, self.coeffs, self.prec) == (other.start, other.coeffs, other.prec)

    def __hash__(self):
        return hash((self.place, self.start, self.coeffs, self.prec))

    def agrees_with(self, other, prec=None):
        """True if self and other coincide below min(prec, their precisions)."""
        diff = self - other
        bound = diff.prec if prec is None else min(prec, diff.prec)
        return diff.valuation >= bound

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        if not other.coeffs:
            return self.truncate(prec)
        if not self.coeffs:
            return other.truncate(prec)
        F = self.field
        lo = min(self.start, other.start)
        hi = max(self.start + len(self.coeffs), other.start + len(other.coeffs))
        if prec != INF:
            hi = min(hi, prec)
        if hi <= lo:
            return LocalElem(self.place, 0, (), prec)
        out = [0] * (hi - lo)
        for src in (self, other):
            off = src.start - lo
            for i, c in enumerate(src.coeffs):
                if off + i >= len(out):
                    break
                out[off + i] = F.add(out[off + i], c) if out[off + i] else c
        return LocalElem(self.place, lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return LocalElem(self.place, self.start, [F.neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        va, vb = self.valuation, other.valuation
        prec = min(self.prec + vb, other.prec + va)
        if not self.coeffs or not other.coeffs:
            return LocalElem(self.place, 0, (), prec)
        start = va + vb
        n = len(self.coeffs) + len(other.coeffs) - 1
        if prec != INF:
            n = min(n, prec - start)
        if n <= 0:
            return LocalElem(self.place, 0, (), prec)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if F.is_prime:
            p = F.p
            out = [0] * n
            for i, x in enumerate(a[:n]):
                if x:
                    for j, y in enumerate(b[: n - i]):
                        out[i + j] += x * y
            out = [c % p for c in out]
        else:
            out = [0] * n
            for i, x in enumerate(a[:n]):
                if x:
                    for j, y in enumerate(b[: n - i]):
                        if y:
                            out[i + j] = F.add(out[i + j], F.mul(x, y))
        return LocalElem(self.place, start, out, prec)

    __rmul__ = __mul__

    def inverse(self, rel_prec=None):
        """Multiplicative inverse.

        The relative precision of the result is that of self; for exact
        non-monomial input it is ``rel_prec`` (default DEFAULT_PRECISION).
        """
        if not self.coeffs:
            raise PrecisionError("cannot invert an element that is zero to precision")
        F = self.field
        v = self.start
        if self.is_exact and len(self.coeffs) == 1:
            return LocalElem(self.place, -v, (F.inv(self.coeffs[0]),))
        R = self.relative_precision
        if R == INF:
            R = DEFAULT_PRECISION if rel_prec is None else rel_prec
        elif rel_prec is not None:
            R = min(R, rel_prec)
        a = self.coeffs
        b0 = F.inv(a[0])
        b = [b0]
        for n in range(1, R):
            s = 0
            for k in range(1, min(n, len(a) - 1) + 1):
                if a[k]:
                    s = F.add(s, F.mul(a[k], b[n - k]))
            b.append(F.neg(F.mul(b0, s)))
        return LocalElem(self.place, -v, b, -v + R)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        rel = None
        if other.is_exact and not self.is_exact and self.coeffs:
            rel = max(DEFAULT_PRECISION, self.relative_precision)
        return self * other.inverse(rel)

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.from_scalar(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, k=1):
        """self^(q^k), computed coefficientwise (characteristic p)."""
        if k == 0:
            return self
        Q = self.place.field.size**k
        F = self.field
        prec = self.prec * Q if self.prec != INF else INF
        if not self.coeffs:
            return LocalElem(self.place, 0, (), prec)
        out = [0] * ((len(self.coeffs) - 1) * Q + 1)
        same = F is self.place.field
        for i, c in enumerate(self.coeffs):
            out[i * Q] = c if (same or c == 0) else F.pow(c, Q)
        return LocalElem(self.place, self.start * Q, out, prec)

    # -- text ---------------------------------------------------------------

    def to_text(self):
        prec = "exact" if self.is_exact else str(self.prec)
        val = "inf" if (not self.coeffs and self.is_exact) else str(self.valuation)
        coeffs = ",".join(self.field.format(c) for c in self.coeffs)
        return f"place={self.place} prec={prec} val={val} coeffs=[{coeffs}]"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            n = self.start + i
            cs = self.field.format(c)
            if "+" in cs:
                cs = f"({cs})"
            mono = "" if n == 0 else ("u" if n == 1 else f"u^{n}")
            terms.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        if not self.is_exact:
            terms.append(f"O(u^{self.prec})")
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"LocalElem[{self.place}]({self})"


def local_from_text(text: str, field) -> LocalElem:
    """Inverse of :meth:`LocalElem.to_text` given the F_q context."""
    from .parsing import parse_poly

    import re

    m = re.fullmatch(r"\s*place=(\S+)\s+prec=(\S+)\s+val=(\S+)\s+coeffs=\[(.*)\]\s*", text)
    if not m:
        raise ParseError("expected 'place=<p> prec=<P> val=<v> coeffs=[...]'", text, 0)
    place_s, prec_s, val_s, coeffs_s = m.groups()
    place = PrimePlace.infinity(field) if place_s == "inf" else PrimePlace.finite(parse_poly(place_s, field))
    prec = INF if prec_s == "exact" else int(prec_s)
    R = residue_field(place)
    coeffs = []
    if coeffs_s.strip():
        for part in coeffs_s.split(","):
            if R is field:
                from .parsing import parse_field_element

                coeffs.append(parse_field_element(part, field))
            else:
                poly = parse_poly(part, field)
                coeffs.append(sum(c * field.size**i for i, c in enumerate(poly.coeffs)))
    start = 0 if val_s == "inf" else int(val_s)
    return LocalElem(place, start, coeffs, prec)


# -- completion F -> K_l ----------------------------------------------------------


def uniformizer(place: PrimePlace) -> LocalElem:
    return LocalElem.monomial(place, 1)


@functools.lru_cache(maxsize=256)
def t_expansion(place: PrimePlace, prec) -> LocalElem:
    """The series T of t at ``place``, known to absolute precision ``prec``."""
    if place.is_infinite:
        return LocalElem.monomial(place, -1)
    alpha = residue_root(place)
    if place.degree == 1:
        return LocalElem(place, 0, (alpha, 1))
    g = place.generator
    dg = g.derivative()
    u = uniformizer(place)
    T = LocalElem(place, 0, (alpha,))
    for _ in range(2 * max(1, prec).bit_length() + 4):
        step = (g(T) - u) * dg(T).inverse(prec)
        new = (T - step).truncate(prec)
        if new == T:
            break
        T = new
    if not (g(T) - u).valuation >= prec:
        raise PrecisionError("Newton iteration for t did not converge")
    return T


def valuation(x, place: PrimePlace):
    """Valuation of a RationalFn/PolyA/LocalElem at ``place``."""
    if isinstance(x, LocalElem):
        if x.place != place:
            raise TypeError("element lives at a different place")
        if not x and not x.is_exact:
            raise PrecisionError("valuation of an element that is zero to precision")
        return x.valuation
    return as_rational(x).valuation(place)


def _exact_poly(place, poly_coeffs):
    return LocalElem(place, 0, poly_coeffs)


def complete(x, place: PrimePlace, precision=None) -> LocalElem:
    """Laurent expansion of x in F_q(t) at ``place``.

    ``precision=None`` returns an exact Laurent polynomial when one exists and
    otherwise uses DEFAULT_PRECISION.
    """
    if isinstance(x, int):
        x = as_rational(x, place.field)
    x = as_rational(x)
    if x.field is not place.field:
        raise TypeError("element and place over different F_q")
    if not x:
        return LocalElem.zero(place, INF if precision is None else precision)
    num, den = x.num, x.den
    if place.is_infinite:
        v = den.degree - num.degree
        top = _exact_poly(place, tuple(reversed(num.coeffs)))
        bot = _exact_poly(place, tuple(reversed(den.coeffs)))
        shift = LocalElem.monomial(place, v)
        if precision is not None and precision <= v:
            raise PrecisionError(f"precision {precision} does not exceed valuation {v}")
        if den.degree == 0:
            out = shift * top * bot.inverse()
        else:
            R = (DEFAULT_PRECISION if precision is None else precision) - v
            out = shift * top * bot.inverse(R)
        return out if precision is None else out.truncate(precision)
    g = place.generator
    a, b = num.valuation_at(g), den.valuation_at(g)
    v = a - b
    if precision is not None and precision <= v:
        raise PrecisionError(f"precision {precision} does not exceed valuation {v}")
    n1, d1 = num // g**a, den // g**b
    shift = LocalElem.monomial(place, v)
    if place.degree == 1:
        T = t_expansion(place, 0)
        top, bot = n1(T), d1(T)
        if d1.degree == 0:
            out = shift * top * bot.inverse()
        else:
            R = (DEFAULT_PRECISION if precision is None else precision) - v
            out = shift * top * bot.inverse(R)
        return out if precision is None else out.truncate(precision)
    P = DEFAULT_PRECISION if precision is None else precision
    R = P - v
    T = t_expansion(place, max(R, 1))
    out = shift * n1(T) * d1(T).inverse(R)
    return out.truncate(P)


# -- Newton polygons --------------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple  # ((x, y), ...) finite points sorted by x
    vertices: tuple
    segments: tuple  # ((slope: Fraction, length: int), ...)

    def root_valuations(self):
        """Multiset of root valuations as ((valuation, count), ...)."""
        return tuple((-s, n) for s, n in self.segments)

    def slopes(self):
        out = []
        for s, n in self.segments:
            out.extend([s] * n)
        return out


def newton_polygon(points) -> NewtonPolygon:
    """Lower convex hull of (x, valuation) points; infinite valuations skipped."""
    best = {}
    for x, y in points:
        if y == INF or y is None:
            continue
        y = Fraction(y)
        if x not in best or y < best[x]:
            best[x] = y
    pts = sorted(best.items())
    if len(pts) < 2:
        raise ValueError("Newton polygon needs at least two finite points")
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below the chord to p
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append((Fraction(y2 - y1) / (x2 - x1), x2 - x1))
    return NewtonPolygon(tuple(pts), tuple(hull), tuple(segs))


def _embed_coeff(c, place, precision):
    if isinstance(c, LocalElem):
        return c
    return complete(c, place, precision)


def local_eval_additive(f, x: LocalElem) -> LocalElem:
    """Evaluate sum c_i x^(q^i) for a torsion polynomial (or OrePoly) f at x.

    Global coefficients are embedded at x's place; exact where possible.
    """
    if not isinstance(x, LocalElem):
        raise TypeError("local_eval_additive needs a LocalElem argument")
    place = x.place
    precision = None if x.is_exact else max(x.prec, DEFAULT_PRECISION)
    acc = LocalElem.zero(place)
    for i, c in enumerate(f.coeffs):
        if not c:
            continue
        acc = acc + _embed_coeff(c, place, precision) * x.frobenius(i)
    if not acc and not acc.is_exact:
        raise PrecisionError(f"result vanishes to precision {acc.prec} but is not provably zero")
    return acc


# -- roots in K_l ---------------------------------------------------------------


def _poly_eval(coeffs, y):
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * y + c
    return acc


def roots_in_completion(coeffs, place: PrimePlace, precision=DEFAULT_PRECISION, max_iter=64):
    """All roots in K_l of sum coeffs[i] X^i, each a simple root.

    Raises IrrationalRepresentativeError when some root is not rational over
    K_l (fractional slope, or too few residue roots) or not simple.
    """
    coeffs = [c for c in coeffs]
    n = len(coeffs) - 1
    while n >= 0 and not coeffs[n]:
        n -= 1
    if n < 1:
        raise ValueError("polynomial must have positive degree")
    coeffs = coeffs[: n + 1]
    roots = []
    k = 0
    while not coeffs[k]:
        k += 1
    if k > 1:
        raise IrrationalRepresentativeError("zero is a repeated root")
    if k == 1:
        roots.append(LocalElem.zero(place))
    F = residue_field(place)
    pts = [(i, coeffs[i].valuation) for i in range(k, n + 1) if coeffs[i]]
    if len(pts) < 2:
        return roots
    poly = newton_polygon(pts)
    for vert, (slope, length) in zip(poly.vertices, poly.segments):
        s = -slope
        if s.denominator != 1:
            raise IrrationalRepresentativeError(f"roots of valuation {s} are not rational over K_{place}")
        s = int(s)
        i0 = vert[0]
        w = vert[1] + s * i0
        w = int(w)
        scaled = []
        for i, c in enumerate(coeffs):
            scaled.append(c * LocalElem.monomial(place, s * i - w) if c else c)
        residual = [c.coefficient(0) if c and c.valuation == 0 else 0 for c in scaled]
        cand = [rho for rho in F.nonzero() if _res_eval(F, residual, rho) == 0]
        simple = [rho for rho in cand if _res_eval(F, _res_deriv(F, residual), rho) != 0]
        if len(simple) != length:
            raise IrrationalRepresentativeError(
                f"{length} roots of valuation {s} expected, {len(simple)} simple residue roots found"
            )
        dscaled = [scaled[i] * i for i in range(1, len(scaled))]
        for rho in simple:
            y = LocalElem(place, 0, (rho,))
            for _ in range(max_iter):
                fy = _poly_eval(scaled, y)
                if not fy:
                    break
                y_new = (y - fy * _poly_eval(dscaled, y).inverse(precision)).truncate(precision)
                if y_new == y:
                    break
                y = y_new
            roots.append((y * LocalElem.monomial(place, s)).truncate(precision + s))
    return roots


def _res_eval(F, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _res_deriv(F, coeffs):
    return [F.mul(F.from_int(i), c) for i, c in enumerate(coeffs)][1:]


__all__ = [
    "DEFAULT_PRECISION",
    "LocalElem",
    "NewtonPolygon",
    "complete",
    "local_eval_additive",
    "local_from_text",
    "newton_polygon",
    "residue_field",
    "residue_root",
    "roots_in_completion",
    "t_expansion",
    "uniformizer",
    "valuation",
]
