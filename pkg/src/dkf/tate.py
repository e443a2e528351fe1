"""Rank-one Tate data (psi, Gamma = psi(A) gamma) at a finite place.

The exponential of Gamma is built one F_q-layer at a time: with
Gamma_k = span(gamma, psi_t gamma, ..., psi_{t^k} gamma),

    e_{Gamma_k} = (1 - beta_k tau) e_{Gamma_{k-1}},
    beta_k = e_{Gamma_{k-1}}(psi_{t^k} gamma)^(1-q).

Every beta_k has positive valuation growing like q^(r k), so a handful of
layers fixes the coefficients to any working precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .drinfeld import DrinfeldModule, phi_of, stable_model, torsion_poly
from .errors import InconsistencyError, IrrationalRepresentativeError, ParseError, PrecisionError, ResourceLimitError
from .lattice import NormValue, gardeyn_norm
from .local import DEFAULT_PRECISION, LocalElem, complete, roots_in_completion
from .ore import OrePoly
from .parsing import parse_key_values, parse_poly, parse_rational
from .polynomials import DEFAULT_ENUM_CAP, PolyA, PrimePlace, RationalFn, as_rational, monic_polys

MARGIN = 2
MAX_LAYERS = 24


@dataclass(frozen=True)
class TateDatum:
    """psi over A with good reduction at ``place`` and gamma in F with v(gamma) < 0.

    ``seed`` (with ``prime``, ``m``) records gamma = psi_{prime^m}(seed) when
    the datum was built by :meth:`from_seed`.
    """

    psi: DrinfeldModule
    place: PrimePlace
    gamma: RationalFn
    seed: RationalFn | None = None
    prime: PolyA | None = None
    m: int | None = None

    def __post_init__(self):
        if self.psi.place is not None:
            raise ValueError("psi must be given over F_q(t)")
        if self.place.is_infinite:
            raise ValueError("Tate data live at a finite place")
        object.__setattr__(self, "gamma", as_rational(self.gamma, self.psi.field))
        red = stable_model(self.psi, self.place)
        if red.kind != "good" or red.mu != 0:
            raise ValueError(f"psi must have good reduction with unit leading coefficient at {self.place}")
        if any(c.valuation(self.place) < 0 for c in self.psi.coeffs):
            raise ValueError(f"psi must have {self.place}-integral coefficients")
        if not self.gamma or self.gamma.valuation(self.place) >= 0:
            raise ValueError("the lattice generator needs negative valuation")

    @classmethod
    def from_seed(cls, psi: DrinfeldModule, place: PrimePlace, seed, prime: PolyA, m: int = 1):
        """gamma = psi_{prime^m}(seed), so psi_{prime^m}(X) = gamma has the rational root seed."""
        seed = as_rational(seed, psi.field)
        gamma = phi_of(psi, prime**m)(seed)
        return cls(psi, place, gamma, seed, prime, m)

    @classmethod
    def from_text(cls, line: str, field=None, header=None):
        """``q=2; phi_t = t + tau; place = t; gamma = t^-2 + 1`` or ``...; seed = t^-1; prime = t; m = 1``."""
        psi = DrinfeldModule.from_text(line, field, header)
        F = psi.field
        kv = parse_key_values(line)

        def get(key, parser):
            text, col = kv[key]
            try:
                return parser(text, F)
            except ParseError as exc:
                raise ParseError(exc.args[0].splitlines()[0].rsplit(" at column", 1)[0], line, col + (exc.position or 0)) from None

        if "place" not in kv:
            raise ParseError("missing 'place = <monic irreducible>'", line, len(line))
        try:
            place = PrimePlace.finite(get("place", parse_poly))
        except ValueError as exc:
            raise ParseError(str(exc), line, kv["place"][1]) from None
        try:
            if "seed" in kv:
                m = int(kv["m"][0]) if "m" in kv else 1
                prime = get("prime", parse_poly) if "prime" in kv else place.generator
                return cls.from_seed(psi, place, get("seed", parse_rational), prime, m)
            if "gamma" not in kv:
                raise ParseError("missing 'gamma = ...' or 'seed = ...'", line, len(line))
            return cls(psi, place, get("gamma", parse_rational))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), line, 0) from None

    @property
    def q(self):
        return self.psi.q

    @property
    def r_psi(self):
        return self.psi.rank

    @property
    def v_gamma(self) -> int:
        return self.gamma.valuation(self.place)

    def gamma_norm(self) -> NormValue:
        return NormValue(-self.v_gamma, self.r_psi)


def _all_polys(field, max_deg):
    """Nonzero a in A with deg a <= max_deg, ordered by degree then coefficients."""
    out = []
    for d in range(max_deg + 1):
        for mono in monic_polys(field, d):
            for c in field.nonzero():
                out.append(mono.scale(c))
    return out


def lattice_points(datum: TateDatum, norm_bound, precision=None):
    """psi_a(gamma) for all a != 0 with q^deg(a) ||gamma|| <= norm_bound."""
    bound = NormValue.coerce(norm_bound)
    base = datum.gamma_norm()
    if bound < base:
        raise ValueError(f"norm bound {bound} is below ||gamma|| = {base}")
    k = 0
    while base * NormValue(datum.q ** (k + 1)) <= bound:
        k += 1
    if datum.q ** (k + 1) > DEFAULT_ENUM_CAP:
        raise ResourceLimitError(f"{datum.q ** (k + 1)} lattice points exceed the enumeration cap")
    pts = []
    for a in _all_polys(datum.psi.field, k):
        x = phi_of(datum.psi, a)(datum.gamma)
        v = x.valuation(datum.place)
        pts.append(complete(x, datum.place, None if precision is None else v + precision))
    return pts


# -- layered exponential ------------------------------------------------------------


def _frob(y: LocalElem, k: int, rel: int) -> LocalElem:
    if k == 0:
        return y
    v = y.valuation
    return y.truncate(v + rel).frobenius(k).truncate(v * y.place.field.size**k + rel)


class _Layers:
    """Lazily computed beta_k at relative precision ``rel``."""

    def __init__(self, datum: TateDatum, rel: int):
        self.datum = datum
        self.rel = rel
        self.q = datum.q
        place = datum.place
        self.psi_t = []
        for c in datum.psi.coeffs:
            if c:
                v = c.valuation(place)
                self.psi_t.append(complete(c, place, v + rel + MARGIN))
            else:
                self.psi_t.append(None)
        v0 = datum.v_gamma
        self.points = [complete(datum.gamma, place, v0 + rel)]
        self.betas = []

    def psi_t_eval(self, y):
        acc = None
        for i, c in enumerate(self.psi_t):
            if c is None:
                continue
            term = c * _frob(y, i, self.rel)
            acc = term if acc is None else acc + term
        return acc.truncate(acc.valuation + self.rel)

    def apply(self, y, layers):
        """e_{Gamma_{layers-1}}(y) by the layered product."""
        for k in range(layers):
            beta = self.beta(k)
            y = y - beta * _frob(y, 1, self.rel)
            if not y:
                raise PrecisionError("layered evaluation lost all precision")
            y = y.truncate(y.valuation + self.rel)
        return y

    def beta(self, k):
        while len(self.betas) <= k:
            j = len(self.betas)
            while len(self.points) <= j:
                self.points.append(self.psi_t_eval(self.points[-1]))
            delta = self.apply(self.points[j], j)
            inv = delta.inverse(self.rel)
            b = inv ** (self.q - 1)
            self.betas.append(b.truncate(b.valuation + self.rel))
        return self.betas[k]

    def evaluate(self, z: LocalElem, max_layers=MAX_LAYERS):
        """e_Gamma(z): apply layers until the correction is below relative precision twice."""
        y = z
        quiet = 0
        for k in range(max_layers):
            corr = self.beta(k) * _frob(y, 1, self.rel)
            y_new = y - corr
            if not y_new:
                raise PrecisionError("e_Gamma(z) vanishes to precision; z is too close to the lattice")
            y_new = y_new.truncate(y_new.valuation + self.rel)
            quiet = quiet + 1 if (not corr or corr.valuation >= y_new.valuation + self.rel) else 0
            y = y_new
            if quiet >= 2:
                return y
        raise PrecisionError(f"e_Gamma(z) not stable after {max_layers} layers")


@dataclass
class ExpSeries:
    """e_Gamma = sum_k coeffs[k] tau^k truncated at tau-degree ``tau_degree``."""

    coeffs: tuple
    tau_degree: int
    precision: int
    layers: int
    norm_bound: NormValue
    betas: tuple
    _layers: _Layers = dc_field(repr=False, compare=False, default=None)

    def ore(self, q) -> OrePoly:
        return OrePoly(self.coeffs, q)

    def __call__(self, z: LocalElem) -> LocalElem:
        return self._layers.evaluate(z)


def exp_series(datum: TateDatum, tau_deg: int, precision: int = DEFAULT_PRECISION, layers: int | None = None) -> ExpSeries:
    """Coefficients of e_Gamma up to tau^tau_deg, known to absolute precision ``precision``.

    With ``layers=None`` layers are added until the truncated coefficients are
    unchanged twice in a row; otherwise exactly ``layers`` layers are used.
    """
    if tau_deg < 1 or precision <= 0:
        raise ValueError("tau degree must be >= 1 and precision positive")
    place, q = datum.place, datum.q
    W = precision + MARGIN
    lay = _Layers(datum, W + MARGIN)
    one = LocalElem(place, 0, (1,))
    e = OrePoly([one], q)
    stable, k = 0, 0
    limit = MAX_LAYERS if layers is None else layers
    while k < limit:
        beta = lay.beta(k)
        factor = OrePoly([one, -beta], q)
        new = factor.mul(e, max_degree=tau_deg).map_coeffs(lambda c: c.truncate(W))
        same = len(new) == len(e) and all(a.truncate(precision) == b.truncate(precision) for a, b in zip(new, e))
        e = new
        k += 1
        if layers is None:
            stable = stable + 1 if same else 0
            if stable >= 2:
                break
    else:
        if layers is None:
            bound = datum.gamma_norm() * NormValue(q ** (k - 1))
            raise PrecisionError(f"e_Gamma not stable to precision {precision} at norm bound {bound}")
    coeffs = tuple(c.truncate(precision) for c in e.coeffs)
    coeffs = coeffs + tuple(LocalElem.zero(place, precision) for _ in range(tau_deg + 1 - len(coeffs)))
    bound = datum.gamma_norm() * NormValue(q ** (k - 1))
    return ExpSeries(coeffs, tau_deg, precision, k, bound, tuple(lay.betas[:k]), lay)


# -- reconstruction ---------------------------------------------------------------


def _psi_local(datum, precision):
    return [complete(c, datum.place, max(precision, c.valuation(datum.place) + 1)) if c else LocalElem.zero(datum.place) for c in datum.psi.coeffs]


def reconstruct_phi(datum: TateDatum, precision: int = DEFAULT_PRECISION, tau_deg: int | None = None, series: ExpSeries | None = None) -> DrinfeldModule:
    """The rank r_psi + 1 module phi over K_l with e_Gamma psi_t = phi_t e_Gamma."""
    r = datum.r_psi
    D = tau_deg if tau_deg is not None else r + 3
    if D < r + 2:
        raise ValueError(f"tau degree must be at least {r + 2} to certify the rank")
    e = series if series is not None else exp_series(datum, D, precision)
    if e.tau_degree < D or e.precision < precision:
        raise ValueError("supplied series is too short or too imprecise")
    ec = e.coeffs
    psi = _psi_local(datum, precision + MARGIN)
    place = datum.place
    phi = [complete(PolyA.t(datum.psi.field), place)]
    for n in range(1, D + 1):
        acc = LocalElem.zero(place)
        for j in range(n + 1):
            i = n - j
            if i < len(psi) and psi[i]:
                acc = acc + ec[j] * psi[i].frobenius(j)
        for i in range(n):
            if phi[i]:
                acc = acc - phi[i] * ec[n - i].frobenius(i)
        phi.append(acc.truncate(precision))
    for n in range(r + 2, D + 1):
        if phi[n].valuation < precision - MARGIN:
            raise InconsistencyError(
                f"coefficient of tau^{n} has valuation {phi[n].valuation} < {precision - MARGIN}; "
                "e_Gamma is not precise enough or the datum is invalid"
            )
    if not phi[r + 1]:
        raise PrecisionError(f"leading coefficient of phi_t vanishes to precision {precision}; raise the precision")
    return DrinfeldModule(datum.psi.field, tuple(phi[: r + 2]), place, precision)


def functional_equation_defect(datum: TateDatum, phi: DrinfeldModule, series: ExpSeries, a=None) -> int:
    """min valuation of the coefficients of e psi_a - phi_a e up to the series' tau-degree."""
    a = PolyA.t(datum.psi.field) if a is None else a
    D = series.tau_degree
    q = datum.q
    psi_a = phi_of(datum.psi, a).map_coeffs(lambda c: complete(c, datum.place, max(series.precision, c.valuation(datum.place) + 1)))
    phi_a = phi_of(phi, a)
    e = series.ore(q)
    diff = e.mul(psi_a, max_degree=D) - phi_a.mul(e, max_degree=D)
    vals = [c.valuation for c in diff.coeffs] or [series.precision]
    return min(min(vals), series.precision)


@dataclass(frozen=True)
class ProductFormulaCheck:
    lhs: LocalElem
    rhs: LocalElem
    defect: int
    representatives: int


def _representatives(datum: TateDatum, prime: PolyA, m: int, rel: int):
    psi, place = datum.psi, datum.place
    pm = prime**m
    tp = torsion_poly(psi, pm)
    dense = [LocalElem.zero(place)] * (tp.degree + 1)
    for i, c in enumerate(tp.coeffs):
        dense[datum.q**i] = complete(c, place, max(rel, c.valuation(place) + 1)) if c else LocalElem.zero(place)
    try:
        torsion = roots_in_completion(dense, place, rel)
    except IrrationalRepresentativeError as exc:
        raise IrrationalRepresentativeError(f"psi[{pm}] is not rational over K_{place}: {exc}") from None
    if len(torsion) != tp.degree:
        raise IrrationalRepresentativeError(f"only {len(torsion)} of {tp.degree} torsion points lie in K_{place}")
    shifts = [RationalFn.from_poly(PolyA(psi.field))] + [phi_of(psi, b)(datum.seed) for b in _all_polys(psi.field, pm.degree - 1)]
    out = []
    for s in shifts:
        for eta in torsion:
            if s:
                z = complete(s, place, s.valuation(place) + rel) + eta
            else:
                z = eta
            out.append(z)
    return out


def product_formula_check(datum: TateDatum, prime: PolyA, m: int, precision: int = DEFAULT_PRECISION, phi: DrinfeldModule | None = None) -> ProductFormulaCheck:
    """Compare the leading coefficient of phi_{p^m} with p^m / prod_{z != 0} e_Gamma(z)."""
    if datum.seed is None:
        raise IrrationalRepresentativeError("datum has no seed: build it with TateDatum.from_seed to get rational representatives")
    if (datum.prime, datum.m) != (prime, m):
        raise ValueError(f"datum was seeded for {datum.prime}^{datum.m}, not {prime}^{m}")
    rel = precision + 2 * MARGIN
    series = exp_series(datum, datum.r_psi + 3, precision)
    if phi is None:
        phi = reconstruct_phi(datum, precision, series=series)
    Z = _representatives(datum, prime, m, rel)
    prod = None
    for z in Z:
        if not z:
            continue
        ez = series(z)
        prod = ez if prod is None else (prod * ez).truncate((prod * ez).valuation + rel)
    pm = prime**m
    rhs = complete(pm, datum.place) * prod.inverse(rel)
    lhs = phi_of(phi, pm).leading()
    diff = lhs - rhs
    return ProductFormulaCheck(lhs, rhs, diff.valuation, len(Z))


def covolume_of_phi(datum: TateDatum) -> NormValue:
    """D(phi, l) = ||gamma|| for a rank-one lattice."""
    return gardeyn_norm(complete(datum.gamma, datum.place), datum.r_psi)


__all__ = [
    "ExpSeries",
    "ProductFormulaCheck",
    "TateDatum",
    "covolume_of_phi",
    "exp_series",
    "functional_equation_defect",
    "lattice_points",
    "product_formula_check",
    "reconstruct_phi",
]
