"""Finite fields F_q and their finite extensions.

Elements are plain non-negative ints.  For a prime field they are residues
mod p.  For an extension ``base[x]/(modulus)`` of a field with Q elements,
the int ``a`` encodes the polynomial sum d_i x^i where d_i are the base-Q
digits of ``a``; in particular the base field sits inside as 0..Q-1.
"""

from __future__ import annotations

import functools
import itertools

from .errors import ResourceLimitError

MAX_FIELD_SIZE = 1 << 16
_ADD_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


class FiniteField:
    """A finite field with ``size`` elements.

    Use :func:`prime_field`, :func:`fq_context` or :meth:`extension` rather
    than calling the constructor directly.
    """

    def __init__(self, p, base=None, modulus=None, symbol="w"):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        self.p = p
        self.base = base
        self.symbol = symbol
        if base is None:
            self.modulus = None
            self.degree = 1
            self.size = p
            return
        modulus = tuple(modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("defining polynomial must be monic of degree >= 1")
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.size = base.size**self.degree
        if self.size > MAX_FIELD_SIZE:
            raise ResourceLimitError(f"field of size {self.size} exceeds cap {MAX_FIELD_SIZE}")
        self._build_tables()

    # -- construction -----------------------------------------------------

    def _to_vec(self, a):
        Q = self.base.size
        vec = []
        for _ in range(self.degree):
            a, d = divmod(a, Q)
            vec.append(d)
        return vec

    def _from_vec(self, vec):
        Q = self.base.size
        a = 0
        for d in reversed(vec):
            a = a * Q + d
        return a

    def _slow_mul(self, a, b):
        B = self.base
        x, y = self._to_vec(a), self._to_vec(b)
        n = self.degree
        prod = [0] * (2 * n - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        prod[i + j] = B.add(prod[i + j], B.mul(xi, yj))
        for k in range(len(prod) - 1, n - 1, -1):
            c = prod[k]
            if c:
                for i in range(n):
                    prod[k - n + i] = B.sub(prod[k - n + i], B.mul(c, self.modulus[i]))
                prod[k] = 0
        return self._from_vec(prod[:n])

    def _build_tables(self):
        B = self.base
        self._add_table = None
        if self.size <= _ADD_TABLE_LIMIT:
            vecs = [self._to_vec(a) for a in range(self.size)]
            self._add_table = [
                [self._from_vec([B.add(u, v) for u, v in zip(vecs[a], vecs[b])]) for b in range(self.size)]
                for a in range(self.size)
            ]
        # A generator of order size-1 exists iff the quotient ring is a field,
        # so finding one doubles as the irreducibility certificate.
        n = self.size - 1
        for g in range(2 if self.size > 2 else 1, self.size):
            exp = [1]
            x = g
            while x != 1 and len(exp) <= n:
                exp.append(x)
                x = self._slow_mul(x, g)
            if len(exp) == n:
                self._exp = exp + exp
                self._log = [0] * self.size
                for i, v in enumerate(exp):
                    self._log[v] = i
                return
        raise ValueError("defining polynomial is not irreducible")

    @functools.cache
    def extension(self, modulus, symbol="x"):
        """Field ``self[x]/(modulus)``; ``modulus`` is a tuple low-to-high."""
        return FiniteField(self.p, base=self, modulus=tuple(modulus), symbol=symbol)

    # -- arithmetic -------------------------------------------------------

    @property
    def is_prime(self):
        return self.base is None

    @property
    def q(self):
        return self.size

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        B = self.base
        return self._from_vec([B.add(u, v) for u, v in zip(self._to_vec(a), self._to_vec(b))])

    def neg(self, a):
        if self.base is None:
            return -a % self.p
        B = self.base
        return self._from_vec([B.neg(u) for u in self._to_vec(a)])

    def sub(self, a, b):
        if self.base is None:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.base is None:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.size - 1 - self._log[a]) % (self.size - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if self.base is None:
            if n < 0:
                a, n = self.inv(a), -n
            return pow(a, n, self.p)
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.size - 1)]

    def elements(self):
        return range(self.size)

    def nonzero(self):
        return range(1, self.size)

    # -- text -------------------------------------------------------------

    def format(self, a):
        if self.base is None:
            return str(a)
        terms = []
        for i, d in reversed(list(enumerate(self._to_vec(a)))):
            if d == 0:
                continue
            c = self.base.format(d)
            if not self.base.is_prime and any(ch in c for ch in "+-"):
                c = f"({c})"
            mono = "" if i == 0 else (self.symbol if i == 1 else f"{self.symbol}^{i}")
            if not mono:
                terms.append(c)
            elif c == "1":
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        if self.base is None:
            return f"GF({self.p})"
        from .polynomials import format_poly

        return f"GF({self.size}; {format_poly(self.base, self.modulus, self.symbol)})"

    def __reduce__(self):
        if self.base is None:
            return (prime_field, (self.p,))
        return (_rebuild_extension, (self.base, self.modulus, self.symbol))


def _rebuild_extension(base, modulus, symbol):
    return base.extension(modulus, symbol)


@functools.cache
def prime_field(p: int) -> FiniteField:
    return FiniteField(p)


def _monic_polys(field, degree):
    for low in itertools.product(range(field.size), repeat=degree):
        yield tuple(reversed(low)) + (1,)


def smallest_irreducible(field, degree):
    """Lexicographically smallest monic irreducible of ``degree`` over ``field``.

    Order compares coefficients from x^(degree-1) down to x^0.
    """
    for mod in _monic_polys(field, degree):
        try:
            FiniteField(field.p, base=field, modulus=mod)
        except ValueError:
            continue
        return mod
    raise AssertionError("no irreducible polynomial found")


@functools.cache
def fq_context(p: int, e: int = 1, modulus=None) -> FiniteField:
    """The field F_q with q = p^e, generator symbol ``w``.

    ``modulus`` (tuple over F_p, low-to-high) defaults to the smallest monic
    irreducible of degree ``e`` so serialized elements are reproducible.
    """
    Fp = prime_field(p)
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if e == 1:
        if modulus not in (None, (0, 1)):
            raise ValueError("prime fields take no defining polynomial")
        return Fp
    if modulus is None:
        modulus = smallest_irreducible(Fp, e)
    modulus = tuple(m % p for m in modulus)
    if len(modulus) != e + 1:
        raise ValueError(f"defining polynomial must have degree {e}")
    return Fp.extension(modulus, "w")


def fq_from_order(q: int) -> FiniteField:
    for p in range(2, q + 1):
        if q % p == 0:
            e, n = 0, q
            while n % p == 0:
                n //= p
                e += 1
            if n != 1:
                break
            return fq_context(p, e)
    raise ValueError(f"{q} is not a prime power")
