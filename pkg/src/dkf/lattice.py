"""A-lattices in F_inf^n with the sup-norm, successive minima and exact norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import ParseError
from .fields import FiniteField
from .local import valuation
from .parsing import parse_rational
from .polynomials import DEG_ZERO, PolyA, PrimePlace, RationalFn, as_rational


def _iroot(n: int, k: int) -> int:
    """floor(n^(1/k)) for n >= 0."""
    if n < 2:
        return n
    x = int(round(n ** (1.0 / k)))
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _exact_root(x: Fraction, k: int):
    a, b = _iroot(x.numerator, k), _iroot(x.denominator, k)
    if a**k == x.numerator and b**k == x.denominator:
        return Fraction(a, b)
    return None


@total_ordering
class NormValue:
    """The positive real x^(1/s) for rational x > 0 and integer s >= 1.

    ``base`` and ``root`` keep the form the value was built from; equality,
    ordering and hashing go through the reduced form with smallest root.
    """

    __slots__ = ("base", "root")

    def __init__(self, base, root: int = 1):
        base = Fraction(base)
        if base <= 0:
            raise ValueError(f"norm base must be positive, got {base}")
        if not isinstance(root, int) or root < 1:
            raise ValueError(f"root index must be a positive integer, got {root!r}")
        self.base, self.root = base, root

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, NormValue) else cls(x, 1)

    def reduced(self) -> "NormValue":
        x, s = self.base, self.root
        for k in range(s, 1, -1):
            if s % k == 0:
                y = _exact_root(x, k)
                if y is not None:
                    return NormValue(y, s // k).reduced()
        return NormValue(x, s)

    def as_fraction(self):
        """The value as a Fraction if rational, else None."""
        r = self.reduced()
        return r.base if r.root == 1 else None

    def _cmp(self, other):
        other = NormValue.coerce(other)
        lhs = self.base**other.root
        rhs = other.base**self.root
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other):
        if not isinstance(other, (NormValue, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        if not isinstance(other, (NormValue, int, Fraction)):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        r = self.reduced()
        return hash((r.base, r.root))

    def __mul__(self, other):
        if not isinstance(other, (NormValue, int, Fraction)):
            return NotImplemented
        other = NormValue.coerce(other)
        s = math.lcm(self.root, other.root)
        return NormValue(self.base ** (s // self.root) * other.base ** (s // other.root), s).reduced()

    __rmul__ = __mul__

    def inverse(self):
        return NormValue(1 / self.base, self.root)

    def __truediv__(self, other):
        if not isinstance(other, (NormValue, int, Fraction)):
            return NotImplemented
        return self * NormValue.coerce(other).inverse()

    def __rtruediv__(self, other):
        return NormValue.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        b = self.base**n if n >= 0 else (1 / self.base) ** (-n)
        return NormValue(b, self.root).reduced()

    def __float__(self):
        return float(self.base) ** (1.0 / self.root)

    def ceil(self) -> int:
        """Smallest integer n with n >= value."""
        x, s = self.base, self.root
        n = _iroot(math.ceil(x), s)
        while Fraction(n) ** s < x:
            n += 1
        while n > 0 and Fraction(n - 1) ** s >= x:
            n -= 1
        return n

    def to_json(self):
        return [str(self.base), self.root]

    def __str__(self):
        r = self.reduced()
        return str(r.base) if r.root == 1 else f"{r.base}^(1/{r.root})"

    def __repr__(self):
        return f"NormValue({self.base}, {self.root})"


# -- linear algebra over F_q(t) -------------------------------------------------


def _zero(field):
    return RationalFn.from_poly(PolyA(field))


def _echelon(rows, field):
    """Row-reduce a copy of ``rows``; return (rows, pivot columns, det sign-ish scale)."""
    m = [list(r) for r in rows]
    pivots = []
    scale = RationalFn.from_poly(PolyA(field, [1]))
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            scale = -scale
        piv = m[r][c]
        scale = scale * piv
        inv = piv.inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots, scale


def determinant(rows, field) -> RationalFn:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    m, pivots, scale = _echelon(rows, field)
    return scale if len(pivots) == n else _zero(field)


def rank_over_F(rows, field) -> int:
    if not rows:
        return 0
    return len(_echelon(rows, field)[1])


def solve(B, C, field):
    """X with B X = C (B n x r of full column rank), or None if inconsistent."""
    n, r = len(B), len(B[0])
    k = len(C[0])
    aug = [list(B[i]) + list(C[i]) for i in range(n)]
    m, pivots, _ = _echelon(aug, field)
    if pivots[:r] != list(range(r)) or any(p >= r for p in pivots[r:]):
        return None
    return [[m[i][r + j] for j in range(k)] for i in range(r)]


# -- F_q linear algebra on leading vectors ----------------------------------------


def _fq_dependency(F: FiniteField, vectors):
    """A nonzero c with sum c_i v_i = 0, or None if the vectors are independent."""
    k = len(vectors)
    n = len(vectors[0]) if vectors else 0
    # columns = vectors; rows carry an identity tag to read off the relation
    rows = [list(v) + [1 if j == i else 0 for j in range(k)] for i, v in enumerate(vectors)]
    r = 0
    for c in range(n):
        p = next((i for i in range(r, k) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(x, inv) for x in rows[r]]
        for i in range(k):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], rows[r])]
        r += 1
    if r == k:
        return None
    return rows[r][n:]


# -- lattices ----------------------------------------------------------------------


def vector_degree(v) -> float:
    """d(v) = max_i deg_inf(v_i), so that ||v|| = q^d(v)."""
    return max((x.deg for x in v), default=DEG_ZERO)


def leading_vector(v, d, field):
    return [x.lead_at_infinity() if x and x.deg == d else 0 for x in v]


@dataclass(frozen=True)
class AmbientLattice:
    """The A-span of the columns of an n x r matrix over F_q(t) inside F_inf^n."""

    field: FiniteField
    columns: tuple  # r columns, each a tuple of n RationalFn

    def __post_init__(self):
        cols = tuple(tuple(as_rational(x, self.field) for x in c) for c in self.columns)
        if not cols:
            raise ValueError("lattice needs at least one basis vector")
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ValueError("basis vectors have different lengths")
        object.__setattr__(self, "columns", cols)
        if rank_over_F(self.rows(), self.field) != len(cols):
            raise ValueError("basis vectors are linearly dependent over F")

    @classmethod
    def from_rows(cls, field, rows):
        rows = [list(r) for r in rows]
        return cls(field, tuple(tuple(r[j] for r in rows) for j in range(len(rows[0]))))

    @classmethod
    def from_text(cls, text: str, field: FiniteField):
        """Row-major matrix: rows separated by ';' or newlines, entries by ','."""
        rows = []
        offset = 0
        for line in text.replace("\n", ";").split(";"):
            if line.strip():
                row, col = [], offset
                for entry in line.split(","):
                    try:
                        row.append(parse_rational(entry, field))
                    except ParseError as exc:
                        raise ParseError(exc.args[0].splitlines()[0].rsplit(" at column", 1)[0], text, col + (exc.position or 0)) from None
                    col += len(entry) + 1
                rows.append(row)
            offset += len(line) + 1
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ParseError("ragged or empty matrix", text, 0)
        return cls.from_rows(field, rows)

    @property
    def rank(self):
        return len(self.columns)

    @property
    def dim(self):
        return len(self.columns[0])

    @property
    def q(self):
        return self.field.size

    def rows(self):
        return [[c[i] for c in self.columns] for i in range(self.dim)]

    def norm(self, v) -> NormValue:
        return NormValue(Fraction(self.q) ** vector_degree(v))

    def combine(self, coeffs):
        """sum a_j lambda_j for a_j in A."""
        out = [_zero(self.field)] * self.dim
        for a, c in zip(coeffs, self.columns):
            if a:
                a = as_rational(a, self.field)
                out = [x + a * y for x, y in zip(out, c)]
        return tuple(out)


@dataclass(frozen=True)
class SuccessiveMinima:
    exponents: tuple  # d_i with c_i = q^d_i
    minima: tuple  # NormValue c_1 <= ... <= c_r
    basis: tuple  # witness lambda_i, same order


def _shift(v, k, c, field):
    m = RationalFn.from_poly(PolyA.monomial(field, k, c))
    return [m * x for x in v]


def reduce_basis(L: AmbientLattice) -> SuccessiveMinima:
    """Successive-minimum basis by leading-coefficient cancellation.

    While the leading vectors t^-d_i lambda_i mod 1/t are dependent over F_q,
    the dependency shifted by powers of t lowers the degree of one column
    of maximal degree (smallest index on ties).  A final pass puts the
    leading vectors in reduced echelon form so the output is canonical.
    """
    F = L.field
    cols = [list(c) for c in L.columns]
    while True:
        degs = [vector_degree(c) for c in cols]
        lead = [leading_vector(c, d, F) for c, d in zip(cols, degs)]
        dep = _fq_dependency(F, lead)
        if dep is None:
            break
        support = [i for i, c in enumerate(dep) if c]
        top = max(degs[i] for i in support)
        j = min(i for i in support if degs[i] == top)
        cj_inv = F.inv(dep[j])
        new = list(cols[j])
        for i in support:
            if i != j:
                coef = F.mul(dep[i], cj_inv)
                new = [a + b for a, b in zip(new, _shift(cols[i], int(top - degs[i]), coef, F))]
        if not any(new):
            raise ValueError("basis vectors are linearly dependent")
        cols[j] = new
    order = sorted(range(len(cols)), key=lambda i: (vector_degree(cols[i]), i))
    cols = [cols[i] for i in order]
    # canonical form: reduced echelon on leading vectors
    pivots = []
    for k in range(len(cols)):
        dk = vector_degree(cols[k])
        for i, p in pivots:
            di = vector_degree(cols[i])
            c = leading_vector(cols[k], dk, F)[p]
            if c:
                cols[k] = [a - b for a, b in zip(cols[k], _shift(cols[i], int(dk - di), c, F))]
        lv = leading_vector(cols[k], dk, F)
        p = next(i for i, x in enumerate(lv) if x)
        inv = F.inv(lv[p])
        cols[k] = [RationalFn.from_poly(PolyA(F, [inv])) * x for x in cols[k]]
        for i, _ in pivots:
            di = vector_degree(cols[i])
            if di == dk:
                c = leading_vector(cols[i], di, F)[p]
                if c:
                    cols[i] = [a - RationalFn.from_poly(PolyA(F, [c])) * b for a, b in zip(cols[i], cols[k])]
        pivots.append((k, p))
    exps = tuple(int(vector_degree(c)) for c in cols)
    q = Fraction(L.q)
    return SuccessiveMinima(exps, tuple(NormValue(q**d) for d in exps), tuple(tuple(c) for c in cols))


def successive_minima(L: AmbientLattice):
    return reduce_basis(L).minima


def change_of_basis(L: AmbientLattice, candidate):
    """U over A with B U = C, or None if ``candidate`` does not span the same lattice."""
    F = L.field
    cand = [tuple(as_rational(x, F) for x in c) for c in candidate]
    if len(cand) != L.rank or any(len(c) != L.dim for c in cand):
        return None
    C = [[c[i] for c in cand] for i in range(L.dim)]
    U = solve(L.rows(), C, F)
    if U is None or not all(x.is_polynomial() for row in U for x in row):
        return None
    det = determinant(U, F)
    if not det or det.deg != 0:
        return None
    return U


def is_smb(L: AmbientLattice, candidate) -> bool:
    """Whether ``candidate`` is a successive-minimum basis of L.

    Raises ValueError if it is not a basis of L at all.
    """
    if change_of_basis(L, candidate) is None:
        raise ValueError("candidate is not a basis of the lattice")
    F = L.field
    cand = [tuple(as_rational(x, F) for x in c) for c in candidate]
    lead = [leading_vector(c, vector_degree(c), F) for c in cand]
    return _fq_dependency(F, lead) is None


def covolume(minima) -> NormValue:
    out = NormValue(1)
    for c in minima:
        out = out * NormValue.coerce(c)
    return out


def last_minimum_bound(eps, D, r: int) -> NormValue:
    """eps^-(r-1) * D, an upper bound for c_r when eps <= c_1."""
    eps = NormValue.coerce(eps) if not isinstance(eps, NormValue) else eps
    if r < 1:
        raise ValueError("rank must be positive")
    return eps ** (-(r - 1)) * NormValue.coerce(D)


def gardeyn_norm(gamma, r_psi: int, place: PrimePlace | None = None) -> NormValue:
    """(-v(gamma))^(1/r_psi) for a lattice element gamma with v(gamma) < 0."""
    v = valuation(gamma, place) if place is not None else gamma.valuation
    if v >= 0:
        raise ValueError(f"lattice elements have negative valuation, got v = {v}")
    return NormValue(-v, r_psi)


__all__ = [
    "AmbientLattice",
    "NormValue",
    "SuccessiveMinima",
    "change_of_basis",
    "covolume",
    "determinant",
    "gardeyn_norm",
    "is_smb",
    "last_minimum_bound",
    "leading_vector",
    "reduce_basis",
    "solve",
    "successive_minima",
    "vector_degree",
]
