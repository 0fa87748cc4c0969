"""Command-line interface: ``bsdtwins verify|search|selmer|localdata|period|fetch``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import arith
from .descent import selmer_group
from .errors import BsdTwinsError, NetworkUnavailable, NotShortForm, NotSquarefree, SingularModel, UnknownLabel
from .isogeny import two_isogeny, twist_isogeny
from .lmfdb_client import LABEL_RE, fetch
from .localdata import global_data, tate_algorithm
from .model import WeierstrassModel, parse_curve, quadratic_twist, to_ab_forms
from .period import DEFAULT_DIGITS, real_period
from .report import CONDITIONAL, EQUAL, NOT_EQUAL, render, verify_pair
from .twinsearch import sieve_condition, sieve

EXIT_OK = 0
EXIT_NOT_EQUAL = 1
EXIT_CONDITIONAL = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_UNAVAILABLE = 69
EXIT_SOFTWARE = 70

VERDICT_EXIT = {EQUAL: EXIT_OK, NOT_EQUAL: EXIT_NOT_EQUAL, CONDITIONAL: EXIT_CONDITIONAL}

BASE_PAIR = ((25350, 2471625), (-50700, 632736000))


@dataclass(frozen=True)
class Config:
    digits: int = DEFAULT_DIGITS
    factor_budget: int = arith.RHO_ITERATIONS
    depth_cap: int | None = None
    fmt: str = "table"
    online: bool = False
    workers: int = 1

    def __post_init__(self):
        for name in ("digits", "factor_budget", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.depth_cap is not None and self.depth_cap <= 0:
            raise ValueError("depth_cap must be positive")
        if self.fmt not in ("json", "table", "markdown"):
            raise ValueError(f"unknown format {self.fmt!r}")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _config(args) -> Config:
    return Config(
        digits=args.digits,
        factor_budget=args.factor_budget,
        depth_cap=args.depth_cap,
        fmt=getattr(args, "format", "table"),
        online=getattr(args, "online", False),
        workers=getattr(args, "workers", 1),
    )


def resolve_curve(text: str, cfg: Config) -> WeierstrassModel:
    if LABEL_RE.match(text.strip()):
        return fetch(text.strip(), online=cfg.online).model
    return parse_curve(text)


def _short(E: WeierstrassModel) -> WeierstrassModel:
    if E.a1 == 0 and E.a3 == 0:
        return E
    # Y^2 = X^3 + b2 X^2 + 8 b4 X + 16 b6 with X = 4x, Y = 4(2y + a1 x + a3)
    return WeierstrassModel(0, E.b2, 0, 8 * E.b4, 16 * E.b6)


def _twisted(E: WeierstrassModel, D: int) -> WeierstrassModel:
    return E if D == 1 else quadratic_twist(_short(E), D)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_verify(args, cfg: Config) -> int:
    E1, E2 = resolve_curve(args.curve1, cfg), resolve_curve(args.curve2, cfg)
    report = verify_pair(E1, E2, args.twist, digits=cfg.digits, depth_cap=cfg.depth_cap)
    print(render(report, cfg.fmt))
    return VERDICT_EXIT[report.overall]


def cmd_search(args, cfg: Config) -> int:
    cond = sieve_condition()
    if args.composite:
        cond = type(cond)(cond.residues, cond.symbols, cond.positive, cond.coprime_to, prime_only=False)
    pair = None
    if not args.no_torsion_guard:
        pair = tuple(WeierstrassModel.from_ab(*ab) for ab in BASE_PAIR)
    found = sieve(cond, args.limit, pair=pair, workers=cfg.workers)
    if cfg.fmt == "json":
        print(_dump({"limit": args.limit, "D": found, "checks": {str(D): cond.diagnostics(D) for D in found}}))
    else:
        print(" ".join(map(str, found)))
        for D in found:
            checks = ", ".join(f"{k}: {'ok' if v else 'FAIL'}" for k, v in cond.diagnostics(D).items())
            print(f"  {D}: {checks}" + ("" if pair is None else ", torsion Z/2: ok"))
    return EXIT_OK


def cmd_selmer(args, cfg: Config) -> int:
    E = resolve_curve(args.curve, cfg)
    forms = to_ab_forms(E)
    if not forms:
        raise ValueError("the curve has no rational 2-torsion point")
    iso = twist_isogeny(two_isogeny(*forms[0]), args.twist)
    sel = selmer_group(iso, args.direction, cfg.depth_cap)
    print(_dump(sel.as_dict()))
    return EXIT_OK


def cmd_localdata(args, cfg: Config) -> int:
    E = _twisted(resolve_curve(args.curve, cfg), args.twist)
    if args.prime is not None:
        if not arith.is_prime(args.prime):
            raise ValueError(f"{args.prime} is not prime")
        records = [tate_algorithm(E, args.prime)]
    else:
        gd = global_data(E)
        records = [gd.local[p] for p in gd.bad_primes]
    for ld in records:
        print(json.dumps(ld.as_dict(), sort_keys=True))
    return EXIT_OK


def cmd_period(args, cfg: Config) -> int:
    E = _twisted(resolve_curve(args.curve, cfg), args.twist)
    omega = real_period(E, cfg.digits)
    if cfg.fmt == "json":
        print(_dump({"omega": omega.display(cfg.digits), "u": omega.u, "method": omega.method}))
    else:
        print(f"Omega = {omega.display(12)}  (u = {omega.u}, {omega.method})")
    return EXIT_OK


def cmd_fetch(args, cfg: Config) -> int:
    rec = fetch(args.label, cache_dir=args.cache_dir, online=cfg.online)
    print(_dump(rec.to_document(source="bsdtwins cache")))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bsdtwins", description="BSD data of 2-isogenous elliptic curve pairs and their twists.")
    p.add_argument("--digits", type=int, default=DEFAULT_DIGITS, help="working precision for periods")
    p.add_argument("--factor-budget", type=int, default=arith.RHO_ITERATIONS, help="Pollard rho iteration budget")
    p.add_argument("--depth-cap", type=int, default=None, help="override the local solubility depth cap")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    curve_help = "LMFDB label, [a1,a2,a3,a4,a6] or (A,B)"

    v = sub.add_parser("verify", help="compare the BSD data of a 2-isogenous pair")
    v.add_argument("curve1", help=curve_help)
    v.add_argument("curve2", help=curve_help)
    v.add_argument("--twist", type=int, default=1)
    v.add_argument("--format", choices=("json", "table", "markdown"), default="table")
    v.add_argument("--online", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="sieve twist parameters D")
    s.add_argument("--limit", type=int, required=True)
    s.add_argument("--composite", action="store_true", help="allow squarefree composite D")
    s.add_argument("--no-torsion-guard", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--format", choices=("json", "table"), default="table")
    s.set_defaults(func=cmd_search)

    sl = sub.add_parser("selmer", help="phi- or phihat-Selmer group with certificates")
    sl.add_argument("curve", help=curve_help)
    sl.add_argument("--twist", type=int, default=1)
    sl.add_argument("--direction", choices=("phi", "phihat"), default="phi")
    sl.add_argument("--online", action="store_true")
    sl.set_defaults(func=cmd_selmer)

    ld = sub.add_parser("localdata", help="Tate's algorithm at the bad primes (JSON lines)")
    ld.add_argument("curve", help=curve_help)
    ld.add_argument("--prime", type=int, default=None)
    ld.add_argument("--twist", type=int, default=1)
    ld.add_argument("--online", action="store_true")
    ld.set_defaults(func=cmd_localdata)

    pe = sub.add_parser("period", help="real period of the minimal model")
    pe.add_argument("curve", help=curve_help)
    pe.add_argument("--twist", type=int, default=1)
    pe.add_argument("--format", choices=("json", "table"), default="table")
    pe.add_argument("--online", action="store_true")
    pe.set_defaults(func=cmd_period)

    f = sub.add_parser("fetch", help="print the LMFDB record for a label")
    f.add_argument("label")
    f.add_argument("--cache-dir", default=None)
    f.add_argument("--online", action="store_true")
    f.set_defaults(func=cmd_fetch)
    return p


def _fail(code: int, exc: BaseException) -> int:
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, exc)
    except ValueError as exc:
        return _fail(EXIT_USAGE, exc)
    saved = arith.RHO_ITERATIONS
    arith.RHO_ITERATIONS = cfg.factor_budget
    try:
        return args.func(args, cfg)
    except (ValueError, UsageError, SingularModel, NotShortForm, NotSquarefree) as exc:
        return _fail(EXIT_USAGE, exc)
    except UnknownLabel as exc:
        return _fail(EXIT_DATA, exc)
    except NetworkUnavailable as exc:
        return _fail(EXIT_UNAVAILABLE, exc)
    except BsdTwinsError as exc:
        return _fail(EXIT_SOFTWARE, exc)
    finally:
        arith.RHO_ITERATIONS = saved


if __name__ == "__main__":
    sys.exit(main())
