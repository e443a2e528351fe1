"""Command-line front end: ``python -m dkf <subcommand> ...``.

Every flag may also be set through an environment variable named
``DKF_<FLAG>`` (upper case, dashes as underscores); explicit flags win.
Exit codes: 0 ok, 1 a certification verdict is false, 2 input error,
3 precision shortfall.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .bounds import DEFAULT_FACTORIAL_CAP, CertificationProfile, certify
from .drinfeld import DrinfeldModule, phi_of, torsion_poly
from .errors import InconsistencyError, IrrationalRepresentativeError, ParseError, PrecisionError, ResourceLimitError
from .lattice import AmbientLattice, covolume, reduce_basis
from .local import newton_polygon, valuation
from .parsing import field_for_q, parse_poly
from .polynomials import DEFAULT_ENUM_CAP, PrimePlace, count_irreducibles, enumerate_irreducibles
from .ramification import break_report, carlitz_local, different_exponent, format_xpoly
from .tate import TateDatum, covolume_of_phi, exp_series, functional_equation_defect, product_formula_check, reconstruct_phi

EXIT_OK, EXIT_VERDICT, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3
BUILTIN_CORPORA = ("carlitz.txt", "tate.txt")
ENV_PREFIX = "DKF_"


@dataclass(frozen=True)
class RunConfig:
    command: str
    q: int | None
    prime: str | None
    level: int
    precision: int
    tau_degree: int | None
    seed: int
    format: str
    cap_factorial: int
    cap_enum: int

    def __post_init__(self):
        if self.format not in ("json", "table"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.cap_factorial < 1 or self.cap_enum < 1:
            raise ValueError("caps must be positive")
        if self.precision < 1:
            raise ValueError("precision must be positive")


def _env(name, default, kind=str):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    try:
        return kind(raw)
    except ValueError:
        raise ValueError(f"bad value {raw!r} in {ENV_PREFIX}{name.upper().replace('-', '_')}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=None, help="field size")
    common.add_argument("--prime", default=None, help="monic irreducible p in F_q[t]")
    common.add_argument("--level", type=int, default=None, help="torsion level m")
    common.add_argument("--precision", type=int, default=None, help="uniformizer digits (default 30)")
    common.add_argument("--tau-degree", type=int, default=None)
    common.add_argument("--seed", type=int, default=None, help="recorded in every report")
    common.add_argument("--format", choices=("json", "table"), default=None)
    common.add_argument("--cap-factorial", type=int, default=None)
    common.add_argument("--cap-enum", type=int, default=None)
    common.add_argument("--fq", default=None, help="field header, e.g. 'Fq: p=2 e=2 mod=w^2+w+1'")

    p = argparse.ArgumentParser(prog="dkf", description="Drinfeld modules, Tate data and ramification break bounds.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("irreducibles", parents=[common], help="monic irreducibles of a given degree")
    s.add_argument("--degree", type=int, required=True)
    s = sub.add_parser("torsion", parents=[common], help="coefficients of phi_a")
    s.add_argument("--phi", default="carlitz", help="'carlitz' or 'phi_t = ...'")
    s.add_argument("--a", required=True, help="operand a in F_q[t]")
    s = sub.add_parser("newton", parents=[common], help="Newton polygon of phi_a at a place")
    s.add_argument("--phi", default="carlitz")
    s.add_argument("--a", required=True)
    s.add_argument("--place", default=None, help="place (default: --prime, else t)")
    s = sub.add_parser("minima", parents=[common], help="successive minima of an A-lattice")
    s.add_argument("--matrix", required=True, help="row-major, rows ';'-separated, entries ','-separated")
    s = sub.add_parser("tate", parents=[common], help="reconstruct phi from a Tate datum")
    s.add_argument("--datum", required=True, help="'q=..; phi_t = ..; place = ..; gamma = ..' (or seed/prime/m)")
    sub.add_parser("breaks", parents=[common], help="ramification breaks of K_p(C[p^m]) / K_p")
    s = sub.add_parser("certify", parents=[common], help="bound comparisons over a corpus")
    s.add_argument("--corpus", default=None, help="corpus file or built-in name (default: all built-in corpora)")
    return p


def resolve_config(ns) -> RunConfig:
    return RunConfig(
        command=ns.command,
        q=ns.q if ns.q is not None else _env("q", None, int),
        prime=ns.prime if ns.prime is not None else _env("prime", None),
        level=ns.level if ns.level is not None else _env("level", 1, int),
        precision=ns.precision if ns.precision is not None else _env("precision", 30, int),
        tau_degree=ns.tau_degree if ns.tau_degree is not None else _env("tau_degree", None, int),
        seed=ns.seed if ns.seed is not None else _env("seed", 0, int),
        format=ns.format if ns.format is not None else _env("format", "json"),
        cap_factorial=ns.cap_factorial if ns.cap_factorial is not None else _env("cap_factorial", DEFAULT_FACTORIAL_CAP, int),
        cap_enum=ns.cap_enum if ns.cap_enum is not None else _env("cap_enum", DEFAULT_ENUM_CAP, int),
    )


# -- rendering --------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    return str(x)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list):
        if not obj:
            yield prefix, "[]"
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, "null" if obj is None else (str(obj).lower() if isinstance(obj, bool) else str(obj))


def render(report, fmt) -> str:
    report = _jsonable(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    rows = list(_flatten(report))
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


# -- subcommands ------------------------------------------------------------------------


def _field(cfg, header=None):
    if cfg.q is None:
        raise ValueError("--q is required")
    return field_for_q(cfg.q, header)


def _module(text, F):
    if text == "carlitz":
        return DrinfeldModule.carlitz(F)
    return DrinfeldModule.from_text(text, F)


def cmd_irreducibles(cfg, ns):
    F = _field(cfg, ns.fq)
    polys = enumerate_irreducibles(F, ns.degree, cfg.cap_enum)
    expected = count_irreducibles(F.size, ns.degree)
    if len(polys) != expected:
        raise InconsistencyError(f"found {len(polys)} irreducibles, Gauss formula gives {expected}")
    return {"count": len(polys), "degree": ns.degree, "irreducibles": [str(f) for f in polys]}, True


def cmd_torsion(cfg, ns):
    F = _field(cfg, ns.fq)
    phi = _module(ns.phi, F)
    a = parse_poly(ns.a, F)
    f = torsion_poly(phi, a)
    out = {
        "module": str(phi),
        "operand": str(a),
        "coefficients": [str(c) for c in f.coeffs],
        "exponents": f.exponents(),
        "leading": str(f.leading),
        "ore": str(phi_of(phi, a)),
    }
    return out, True


def cmd_newton(cfg, ns):
    F = _field(cfg, ns.fq)
    phi = _module(ns.phi, F)
    a = parse_poly(ns.a, F)
    place_text = ns.place or cfg.prime or "t"
    place = PrimePlace.infinity(F) if place_text == "inf" else PrimePlace.finite(parse_poly(place_text, F))
    f = torsion_poly(phi, a)
    pts = [(q_i, valuation(c, place)) for q_i, c in zip(f.exponents(), f.coeffs) if c]
    poly = newton_polygon(pts)
    return {
        "place": str(place),
        "points": [[x, str(y)] for x, y in poly.points],
        "vertices": [[x, str(y)] for x, y in poly.vertices],
        "segments": [{"length": n, "slope": str(s)} for s, n in poly.segments],
        "root_valuations": [{"count": n, "valuation": str(v)} for v, n in poly.root_valuations()],
    }, True


def cmd_minima(cfg, ns):
    F = _field(cfg, ns.fq)
    L = AmbientLattice.from_text(ns.matrix, F)
    sm = reduce_basis(L)
    return {
        "rank": L.rank,
        "exponents": list(sm.exponents),
        "minima": [m.to_json() for m in sm.minima],
        "basis": [[str(x) for x in v] for v in sm.basis],
        "covolume": covolume(sm.minima).to_json(),
    }, True


def cmd_tate(cfg, ns):
    F = _field(cfg, ns.fq) if cfg.q is not None else None
    datum = TateDatum.from_text(ns.datum, F)
    D = cfg.tau_degree if cfg.tau_degree is not None else datum.r_psi + 3
    P = cfg.precision
    series = exp_series(datum, D, P)
    phi = reconstruct_phi(datum, P, D, series=series)
    out = {
        "datum": {"gamma": str(datum.gamma), "place": str(datum.place), "psi": str(datum.psi)},
        "exp_series": {
            "coefficients": [c.to_text() for c in series.coeffs],
            "layers": series.layers,
            "norm_bound": series.norm_bound.to_json(),
            "precision": series.precision,
        },
        "phi": {"coefficients": [c.to_text() for c in phi.coeffs], "rank": phi.rank},
        "covolume": covolume_of_phi(datum).to_json(),
        "defect": functional_equation_defect(datum, phi, series),
    }
    ok = True
    if datum.seed is not None:
        try:
            chk = product_formula_check(datum, datum.prime, datum.m, P, phi)
            out["product_formula"] = {
                "defect": chk.defect,
                "lhs": chk.lhs.to_text(),
                "representatives": chk.representatives,
                "rhs": chk.rhs.to_text(),
            }
        except IrrationalRepresentativeError as exc:
            out["product_formula"] = {"error": str(exc)}
    return out, ok


def cmd_breaks(cfg, ns):
    F = _field(cfg, ns.fq)
    prime = parse_poly(cfg.prime or "t", F)
    pres = carlitz_local(F, prime, cfg.level, cap=cfg.cap_enum)
    rep = break_report(pres)
    direct, via = different_exponent(pres)
    out = rep.to_json()
    out.update(
        {
            "h": format_xpoly(pres.h),
            "prime": str(prime),
            "level": cfg.level,
            "different": {"from_derivative": direct, "from_filtration": via},
            "hasse_arf": all(Fraction(u).denominator == 1 for u in rep.upper_breaks),
        }
    )
    return out, True


def load_corpus(name):
    """Lines of a corpus file, or of a built-in corpus by name."""
    if name is None:
        names = BUILTIN_CORPORA
    else:
        path = Path(name)
        if path.exists():
            return [(str(path), i + 1, line) for i, line in enumerate(path.read_text().splitlines())]
        if Path(name).name not in BUILTIN_CORPORA:
            raise FileNotFoundError(f"corpus {name!r} not found (built-in: {', '.join(BUILTIN_CORPORA)})")
        names = (Path(name).name,)
    out = []
    for n in names:
        text = resources.files("dkf").joinpath("data", n).read_text()
        out.extend((n, i + 1, line) for i, line in enumerate(text.splitlines()))
    return out


def _certify_entry(obj, cfg):
    kind = obj.get("kind")
    m = int(obj.get("m", cfg.level))
    r = int(obj.get("r", 2))
    if kind == "carlitz":
        F = field_for_q(int(obj["q"]))
        prime = parse_poly(obj["prime"], F)
        place = PrimePlace.finite(prime)
        N = {place: int(obj["N"])} if "N" in obj else {}
        return certify(DrinfeldModule.carlitz(F), place, prime, m, CertificationProfile(r, N), cfg.precision, cfg.cap_factorial)
    if kind == "drinfeld":
        phi = DrinfeldModule.from_text(obj["module"])
        place = PrimePlace.finite(parse_poly(obj["place"], phi.field))
        prime = parse_poly(obj["prime"], phi.field)
        N = {place: int(obj["N"])} if "N" in obj else {}
        return certify(phi, place, prime, m, CertificationProfile(r, N), cfg.precision, cfg.cap_factorial)
    if kind == "tate":
        datum = TateDatum.from_text(obj["datum"])
        prime = parse_poly(obj["prime"], datum.psi.field)
        N = {datum.place: int(obj["N"])} if "N" in obj else {}
        return certify(datum, datum.place, prime, m, CertificationProfile(r, N), cfg.precision, cfg.cap_factorial)
    raise ValueError(f"unknown corpus entry kind {kind!r}")


def cmd_certify(cfg, ns):
    reports = []
    for source, lineno, line in load_corpus(ns.corpus):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{source}:{lineno}: {exc.msg}", line, exc.colno - 1) from None
        try:
            rep = _certify_entry(obj, cfg)
        except ParseError as exc:
            raise ParseError(f"{source}:{lineno}: {exc.args[0]}") from None
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
        reports.append({"source": f"{source}:{lineno}", **rep.to_json()})
    ok = all(r["verdict"] for r in reports)
    return {"reports": reports, "verdict": ok}, ok


COMMANDS = {
    "irreducibles": cmd_irreducibles,
    "torsion": cmd_torsion,
    "newton": cmd_newton,
    "minima": cmd_minima,
    "tate": cmd_tate,
    "breaks": cmd_breaks,
    "certify": cmd_certify,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = resolve_config(ns)
        result, ok = COMMANDS[cfg.command](cfg, ns)
    except (PrecisionError, InconsistencyError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PRECISION
    except (ParseError, ValueError, TypeError, KeyError, ResourceLimitError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    cfg_json = {k: v for k, v in asdict(cfg).items() if k != "command"}
    report = {"command": cfg.command, "config": cfg_json, "result": result}
    stdout.write(render(report, cfg.format))
    return EXIT_OK if ok else EXIT_VERDICT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
