"""Arithmetic in A = F_q[t] and F = F_q(t), primes of A, and global constants."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceLimitError
from .fields import FiniteField

#: Degree of the zero polynomial.  Compares below every integer.
DEG_ZERO = float("-inf")

DEFAULT_ENUM_CAP = 1 << 16


# -- dense coefficient-list helpers over a FiniteField -----------------------


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = F.add(out[i], y)
    return _trim(out)


def _pneg(F, a):
    return [F.neg(x) for x in a]


def _pmul(F, a, b):
    if not a or not b:
        return []
    if F.is_prime:
        p = F.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _trim(v % p for v in out)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _trim(out)


def _pdivmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv_lc = F.inv(b[-1])
    if len(r) - 1 < db:
        return [], _trim(r)
    quo = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c == 0:
            continue
        c = F.mul(c, inv_lc)
        quo[k - db] = c
        for i, y in enumerate(b):
            if y:
                r[k - db + i] = F.sub(r[k - db + i], F.mul(c, y))
    return _trim(quo), _trim(r[:db])


# -- A = F_q[t] ----------------------------------------------------------------


class PolyA:
    """Polynomial in t over an F_q context; immutable.

    ``coeffs[i]`` is the coefficient of t^i, no trailing zeros.
    """

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FiniteField, coeffs=()):
        self.field = field
        self.coeffs = tuple(_trim(coeffs))
        self._hash = None

    # constructors
    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def t(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def monomial(cls, field, n, c=1):
        return cls(field, [0] * n + [c])

    def _coerce(self, other):
        if isinstance(other, PolyA):
            if other.field is not self.field:
                raise TypeError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return PolyA(self.field, [self.field.from_int(other)])
        return NotImplemented

    # basic data
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self):
        return len(self.coeffs) <= 1

    def is_monic(self):
        return self.lc == 1

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = PolyA(self.field, [self.field.from_int(other)])
        if not isinstance(other, PolyA):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.field), self.coeffs))
        return self._hash

    def sort_key(self):
        """Order by degree, then coefficients from the top down."""
        return (len(self.coeffs), tuple(reversed(self.coeffs)))

    # ring operations
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PolyA(self.field, _padd(self.field, self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return PolyA(self.field, _pneg(self.field, self.coeffs))

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
        return PolyA(self.field, _pmul(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, c):
        F = self.field
        return PolyA(F, [F.mul(c, x) for x in self.coeffs])

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial; use RationalFn")
        result = PolyA(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        q, r = _pdivmod(self.field, self.coeffs, other.coeffs)
        return PolyA(self.field, q), PolyA(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other):
        return not (other % self)

    def monic(self):
        if not self:
            return self
        return self.scale(self.field.inv(self.lc))

    def gcd(self, other):
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """(g, s, u) with s*self + u*other = g monic."""
        F = self.field
        r0, r1 = self, other
        s0, s1 = PolyA(F, [1]), PolyA(F)
        u0, u1 = PolyA(F), PolyA(F, [1])
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            u0, u1 = u1, u0 - q * u1
        if not r0:
            return r0, s0, u0
        inv = F.inv(r0.lc)
        return r0.scale(inv), s0.scale(inv), u0.scale(inv)

    def derivative(self):
        F = self.field
        return PolyA(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation; ``x`` may be a field element or any ring value."""
        if isinstance(x, int) and not isinstance(x, bool):
            F = self.field
            acc = 0
            for c in reversed(self.coeffs):
                acc = F.add(F.mul(acc, x), c)
            return acc
        acc = None
        for c in reversed(self.coeffs):
            acc = x.from_scalar(c) if acc is None else acc * x + x.from_scalar(c)
        return acc if acc is not None else x.from_scalar(0)

    def frobenius(self, k=1):
        """self^(q^k); coefficients lie in F_q so only t is raised."""
        step = self.field.size**k
        out = [0] * ((len(self.coeffs) - 1) * step + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return PolyA(self.field, out)

    def valuation_at(self, g):
        """Multiplicity of the prime ``g`` in self (self nonzero)."""
        if not self:
            return math.inf
        v, f = 0, self
        while True:
            q, r = divmod(f, g)
            if r:
                return v
            v, f = v + 1, q

    def is_irreducible(self):
        return is_irreducible(self)

    def __str__(self):
        return format_poly(self.field, self.coeffs, "t")

    def __repr__(self):
        return f"PolyA({self})"


def format_poly(field, coeffs, var):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        cs = field.format(c)
        if not field.is_prime and any(ch in cs for ch in "+-") and i > 0:
            cs = f"({cs})"
        if i == 0:
            terms.append(cs)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        terms.append(mono if cs == "1" else f"{cs}*{mono}")
    return "+".join(terms) if terms else "0"


def _powmod(base, e, mod):
    result = PolyA(base.field, [1])
    base = base % mod
    while e:
        if e & 1:
            result = result * base % mod
        base = base * base % mod
        e >>= 1
    return result


def _prime_divisors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: PolyA) -> bool:
    """Rabin's test: f | t^(q^d) - t and gcd(t^(q^(d/r)) - t, f) = 1."""
    d = f.degree
    if d == DEG_ZERO or d < 1:
        return False
    if d == 1:
        return True
    f = f.monic()
    q = f.field.size
    t = PolyA.t(f.field)

    def frob_power(k):
        x = t
        for _ in range(k):
            x = _powmod(x, q, f)
        return x

    if (frob_power(d) - t) % f:
        return False
    for r in _prime_divisors(d):
        if (frob_power(d // r) - t).gcd(f).degree > 0:
            return False
    return True


def monic_polys(field, d):
    """All monic polynomials of degree d, in lexicographic coefficient order."""
    for low in itertools.product(range(field.size), repeat=d):
        yield PolyA(field, tuple(reversed(low)) + (1,))


def mobius(n):
    result, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    return -result if n > 1 else result


def count_irreducibles(q, d):
    return sum(mobius(d // e) * q**e for e in range(1, d + 1) if d % e == 0) // d


def enumerate_irreducibles(field: FiniteField, d: int, cap: int = DEFAULT_ENUM_CAP):
    """Monic irreducibles of degree ``d`` in lexicographic coefficient order."""
    if d < 1:
        raise ValueError("degree must be positive")
    if field.size**d > cap:
        raise ResourceLimitError(f"q^d = {field.size ** d} exceeds enumeration cap {cap}")
    return [f for f in monic_polys(field, d) if is_irreducible(f)]


@dataclass(frozen=True)
class Factorization:
    unit: int
    factors: tuple  # ((PolyA, multiplicity), ...) sorted by sort_key

    def expand(self, field):
        out = PolyA(field, [self.unit])
        for g, e in self.factors:
            out = out * g**e
        return out


def factor(f: PolyA, cap: int = DEFAULT_ENUM_CAP) -> Factorization:
    """Trial division by monic irreducibles up to degree deg(f)/2."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    unit = f.lc
    g = f.monic()
    found = []
    d = 1
    while 2 * d <= g.degree:
        for p in enumerate_irreducibles(f.field, d, cap):
            e = 0
            while True:
                q, r = divmod(g, p)
                if r:
                    break
                g, e = q, e + 1
            if e:
                found.append((p, e))
        d += 1
    if g.degree > 0:
        found.append((g, 1))
    found.sort(key=lambda pe: pe[0].sort_key())
    return Factorization(unit, tuple(found))


def tame_lcm_d(q, r: int) -> int:
    """lcm{q^i - 1 : 1 <= i <= r}, the tame ramification index bound."""
    if isinstance(q, FiniteField):
        q = q.size
    if r < 1:
        raise ValueError("rank must be positive")
    return math.lcm(*(q**i - 1 for i in range(1, r + 1)))


def abs_infty(a: PolyA):
    """Exponent of |a|_inf = q^deg(a); DEG_ZERO for a = 0."""
    return a.degree


# -- F = F_q(t) ----------------------------------------------------------------


class RationalFn:
    """Element num/den of F_q(t) with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if isinstance(num, RationalFn) and den is None:
            self.num, self.den = num.num, num.den
            return
        if den is None:
            den = PolyA(num.field, [1])
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not num:
                den = PolyA(num.field, [1])
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num // g, den // g
                c = num.field.inv(den.lc)
                if c != 1:
                    num, den = num.scale(c), den.scale(c)
        self.num, self.den = num, den

    @classmethod
    def from_poly(cls, p):
        return cls(p, PolyA(p.field, [1]), _reduced=True)

    @property
    def field(self):
        return self.num.field

    def _coerce(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, PolyA):
            return RationalFn.from_poly(other)
        if isinstance(other, int):
            return RationalFn.from_poly(PolyA(self.field, [self.field.from_int(other)]))
        return NotImplemented

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self):
        return self.den.degree == 0

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, _reduced=True)

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
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFn(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFn(self.num**n, self.den**n, _reduced=True)

    def frobenius(self, k=1):
        return RationalFn(self.num.frobenius(k), self.den.frobenius(k), _reduced=True)

    def from_scalar(self, c):
        return RationalFn.from_poly(PolyA(self.field, [c]))

    def valuation(self, place: "PrimePlace"):
        """Normalized valuation at ``place`` (math.inf for zero)."""
        if not self.num:
            return math.inf
        if place.is_infinite:
            return self.den.degree - self.num.degree
        g = place.generator
        return self.num.valuation_at(g) - self.den.valuation_at(g)

    @property
    def deg(self):
        """deg num - deg den, i.e. minus the valuation at infinity."""
        if not self.num:
            return DEG_ZERO
        return self.num.degree - self.den.degree

    def lead_at_infinity(self):
        """Leading coefficient in the 1/t-expansion."""
        F = self.field
        return F.div(self.num.lc, self.den.lc)

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        n, d = str(self.num), str(self.den)
        if "+" in n:
            n = f"({n})"
        if "+" in d or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalFn({self})"


def as_rational(x, field=None):
    if isinstance(x, RationalFn):
        return x
    if isinstance(x, PolyA):
        return RationalFn.from_poly(x)
    if isinstance(x, int) and field is not None:
        return RationalFn.from_poly(PolyA(field, [field.from_int(x)]))
    raise TypeError(f"cannot interpret {x!r} as an element of F_q(t)")


# -- primes ------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimePlace:
    """A place of F_q(t): a finite prime (monic irreducible) or infinity = (1/t)."""

    field: FiniteField
    generator: PolyA | None = None

    def __post_init__(self):
        g = self.generator
        if g is not None:
            if g.field is not self.field:
                raise TypeError("generator over the wrong field")
            if not g.is_monic() or not is_irreducible(g):
                raise ValueError(f"{g} is not a monic irreducible polynomial")

    @classmethod
    def finite(cls, g: PolyA):
        return cls(g.field, g)

    @classmethod
    def infinity(cls, field):
        return cls(field, None)

    @property
    def kind(self):
        return "infinite" if self.generator is None else "finite"

    @property
    def is_infinite(self):
        return self.generator is None

    @property
    def degree(self):
        return 1 if self.generator is None else self.generator.degree

    def __str__(self):
        return "inf" if self.generator is None else str(self.generator)

    def __repr__(self):
        return f"PrimePlace({self})"


def fraction_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
