"""Text syntax for field elements, polynomials in t, and tau-polynomials.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' '-'? INT)?
    atom   := INT | NAME | '(' expr ')'

Names: ``t``, the F_q generator ``w`` (non-prime q only) and ``tau``.
Everything evaluates into an :class:`OrePoly` over :class:`RationalFn`; the
specialised entry points then insist on the shape they need.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .fields import FiniteField, fq_context, fq_from_order, prime_field
from .ore import OrePoly
from .polynomials import PolyA, RationalFn

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        start = m.start(m.lastindex)
        kind = ("int", "name", "op")[m.lastindex - 1]
        val = m.group(m.lastindex)
        out.append((kind, "^" if val == "**" else val, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text, field: FiniteField, symbols):
        self.text = text
        self.field = field
        self.symbols = symbols
        self.toks = _tokenize(text)
        self.i = 0
        self.q = field.size

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def const(self, c):
        return OrePoly([RationalFn.from_poly(PolyA(self.field, [c]))], self.q)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op_tok = self.take()
            w = self.unary()
            if op_tok[1] == "*":
                v = v.mul(w)
            else:
                if w.degree != 0:
                    self.fail("can only divide by a nonzero tau-free expression", op_tok)
                inv = w[0].inverse()
                v = v.map_coeffs(lambda c: c * inv)
        return v

    def unary(self):
        if self.peek() == ("op", "-", self.peek()[2]):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            neg = False
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                neg = True
            tok = self.take()
            if tok[0] != "int":
                self.fail("expected integer exponent", tok)
            n = int(tok[1])
            if neg:
                if base.degree != 0:
                    self.fail("negative power of a tau-expression", tok)
                return OrePoly([base[0] ** (-n)], self.q)
            return base**n
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return self.const(self.field.from_int(int(val)))
        if kind == "name":
            if val not in self.symbols:
                self.fail(f"unknown symbol {val!r}", tok)
            return self.symbols[val]()
        if kind == "op" and val == "(":
            v = self.expr()
            close = self.take()
            if close[1] != ")":
                self.fail("expected ')'", close)
            return v
        self.fail("unexpected end of input" if kind == "end" else f"unexpected {val!r}", tok)


def _symbols(parser, allow_tau):
    F = parser.field
    q = F.size
    syms = {"t": lambda: OrePoly([RationalFn.from_poly(PolyA.t(F))], q)}
    if not F.is_prime:
        # w is the class of x in F_p[x]/(mod): base-p digits (0, 1) -> int p
        syms[F.symbol] = lambda: parser.const(F.p)
    if allow_tau:
        syms["tau"] = lambda: OrePoly([RationalFn.from_poly(PolyA(F, [0])), RationalFn.from_poly(PolyA(F, [1]))], q)
    return syms


def _run(text, field, allow_tau):
    p = _Parser(text, field, {})
    p.symbols = _symbols(p, allow_tau)
    return p.parse()


def parse_ore(text: str, field: FiniteField) -> OrePoly:
    """Parse a tau-polynomial such as ``t + (t+1)*tau + t^2*tau^2``."""
    return _run(text, field, True)


def parse_rational(text: str, field: FiniteField) -> RationalFn:
    v = _run(text, field, False)
    return v[0] if v else RationalFn.from_poly(PolyA(field))


def parse_poly(text: str, field: FiniteField) -> PolyA:
    r = parse_rational(text, field)
    if not r.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial in t", text, 0)
    return r.num.scale(field.inv(r.den.lc)) if r.den.lc != 1 else r.num


def parse_field_element(text: str, field: FiniteField) -> int:
    """An element of F_q written as an integer (prime q) or a polynomial in w."""
    p = _Parser(text, field, {})
    syms = _symbols(p, False)
    del syms["t"]
    p.symbols = syms
    v = p.parse()
    if not v:
        return 0
    r = v[0]
    if not r.is_polynomial() or r.num.degree > 0:
        raise ParseError(f"{text!r} is not an element of F_{field.size}", text, 0)
    return r.num[0] if r.num else 0


_HEADER = re.compile(r"^\s*Fq\s*:\s*(.*)$")


def parse_fq_header(line: str) -> FiniteField:
    """``Fq: p=2 e=2 mod=w^2+w+1`` (``mod`` optional)."""
    m = _HEADER.match(line)
    if not m:
        raise ParseError("expected header 'Fq: p=<p> e=<e> [mod=<poly in w>]'", line, 0)
    fields = {}
    for part in re.finditer(r"(\w+)\s*=\s*(\S+)", m.group(1)):
        fields[part.group(1)] = (part.group(2), part.start(2) + m.start(1))
    if "p" not in fields:
        raise ParseError("header missing p=", line, m.start(1))
    try:
        p = int(fields["p"][0])
        e = int(fields.get("e", ("1", 0))[0])
    except ValueError as exc:
        raise ParseError(f"bad integer in header: {exc}", line, m.start(1)) from None
    modulus = None
    if "mod" in fields:
        text, col = fields["mod"]
        Fp = prime_field(p)
        try:
            r = _Parser(text.replace("w", "t"), Fp, {})
            r.symbols = _symbols(r, False)
            poly = r.parse()[0].num
        except ParseError as exc:
            raise ParseError(f"bad defining polynomial: {exc.args[0].splitlines()[0]}", line, col) from None
        modulus = poly.coeffs
    try:
        return fq_context(p, e, modulus)
    except ValueError as exc:
        raise ParseError(str(exc), line, m.start(1)) from None


def field_for_q(q: int, header: str | None = None) -> FiniteField:
    if header:
        F = parse_fq_header(header)
        if F.size != q:
            raise ParseError(f"header field has {F.size} elements, expected {q}", header, 0)
        return F
    return fq_from_order(q)


def parse_key_values(line: str):
    """Split ``k1=v1; k2 = v2`` into an ordered dict with value columns."""
    out = {}
    pos = 0
    for chunk in line.split(";"):
        if chunk.strip():
            if "=" not in chunk:
                raise ParseError("expected key=value", line, pos + len(chunk) - len(chunk.lstrip()))
            k, v = chunk.split("=", 1)
            col = pos + len(k) + 1 + (len(v) - len(v.lstrip()))
            out[k.strip()] = (v.strip(), col)
        pos += len(chunk) + 1
    return out
