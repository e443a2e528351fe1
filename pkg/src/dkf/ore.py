"""Twisted polynomials sum f_i tau^i with tau * c = c^q * tau.

Coefficients are any ring values exposing ``+ - *``, truthiness for zero,
and ``frobenius(k)`` returning ``c^(q^k)`` (RationalFn and LocalElem do).
"""

from __future__ import annotations


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class OrePoly:
    __slots__ = ("coeffs", "q")

    def __init__(self, coeffs, q):
        self.coeffs = _trim(coeffs)
        self.q = q

    @property
    def degree(self):
        """tau-degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def leading(self):
        return self.coeffs[-1]

    def _check(self, other):
        if not isinstance(other, OrePoly):
            return NotImplemented
        if other.q != self.q:
            raise TypeError(f"twist exponents differ: {self.q} vs {other.q}")
        if self.coeffs and other.coeffs and type(self.coeffs[0]) is not type(other.coeffs[0]):
            raise TypeError("Ore polynomials over different coefficient rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return OrePoly(out, self.q)

    def __neg__(self):
        return OrePoly([-c for c in self.coeffs], self.q)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def mul(self, other, max_degree=None):
        """Product self * other, optionally discarding tau-degrees above ``max_degree``."""
        other = self._check(other)
        if other is NotImplemented:
            raise TypeError("Ore product needs two OrePoly operands")
        if not self.coeffs or not other.coeffs:
            return OrePoly((), self.q)
        top = len(self.coeffs) + len(other.coeffs) - 2
        if max_degree is not None:
            top = min(top, max_degree)
        out = [None] * (top + 1)
        for i, f in enumerate(self.coeffs):
            if i > top or not f:
                continue
            for j, g in enumerate(other.coeffs):
                if i + j > top:
                    break
                term = f * g.frobenius(i) if i else f * g
                out[i + j] = term if out[i + j] is None else out[i + j] + term
        zero = self.coeffs[0] - self.coeffs[0]
        return OrePoly([zero if c is None else c for c in out], self.q)

    def __mul__(self, other):
        if isinstance(other, OrePoly):
            return self.mul(other)
        # right scalar: f * c = sum f_i c^(q^i) tau^i
        return OrePoly([f * other.frobenius(i) for i, f in enumerate(self.coeffs)], self.q)

    def __rmul__(self, other):
        return OrePoly([other * f for f in self.coeffs], self.q)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of an Ore polynomial")
        one = self.coeffs[0] - self.coeffs[0] + 1 if self.coeffs else 1
        result = OrePoly([one], self.q)
        base = self
        while n:
            if n & 1:
                result = result.mul(base)
            base = base.mul(base)
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, OrePoly):
            return NotImplemented
        return self.q == other.q and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __call__(self, x):
        """Evaluate the additive polynomial sum f_i x^(q^i)."""
        acc = None
        for i, f in enumerate(self.coeffs):
            if not f:
                continue
            term = f * x.frobenius(i)
            acc = term if acc is None else acc + term
        return acc if acc is not None else x - x

    def map_coeffs(self, fn):
        return OrePoly([fn(c) for c in self.coeffs], self.q)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = str(c)
            if "+" in cs or "-" in cs[1:]:
                cs = f"({cs})"
            mono = "" if i == 0 else ("tau" if i == 1 else f"tau^{i}")
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"OrePoly({self}; q={self.q})"
