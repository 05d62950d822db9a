"""Command line interface.

Exit codes: 0 success, 1 a claim failed verification, 2 invalid or
unsupported parameters, 3 I/O failure, 4 malformed input file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import constructions as C
from .bounds import classify_parameters, lempel_greenberger, peng_fan, simplified_lempel_greenberger, \
    simplified_peng_fan
from .correlation import FhsSet, set_correlation
from .designs import (BlockFamily, Bncdp, Bncrdp, Cdm, bncdp_index, fhs_set_to_bncdp, verify_bncdp,
                      verify_bncrdp, verify_cdm, verify_cdp)
from .exceptions import (ConstructionError, FixtureError, InvalidInputError, NotApplicableError, SchemaError,
                         UnsupportedParametersError)
from .files import DesignFile, content_hash, dumps, from_csv, load, to_csv, to_rows

EXIT_OK, EXIT_FAIL, EXIT_PARAMS, EXIT_IO, EXIT_SCHEMA = 0, 1, 2, 3, 4

# above this many symbol comparisons `construct` falls back to structural checking
EXHAUSTIVE_LIMIT = 2 * 10**9


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _exhaustive_cost(s: FhsSet) -> int:
    return s.n * s.n * s.M * (s.M + 1) // 2


def _measure(s: FhsSet, structural: bool) -> tuple[int, dict[str, Any]]:
    if structural:
        value = bncdp_index(fhs_set_to_bncdp(s))
        return value, {"method": "structural", "H": value}
    prof = set_correlation(s)
    i, j, tau = prof.witness
    summary = {
        "method": "exhaustive",
        "H": prof.value,
        "witness": {"i": i, "j": j, "tau": tau},
        "auto": [prof.auto(k) for k in range(s.M)],
        "cross": [[p.i, p.j, p.maximum] for p in prof.pairs if p.i != p.j],
    }
    return prof.value, summary


# -- construct -------------------------------------------------------------------

def _base_set(path: str | None) -> FhsSet:
    if not path:
        raise InvalidInputError("--base is required for this family")
    df = load(path)
    if not isinstance(df.obj, FhsSet):
        raise InvalidInputError(f"--base must be an fhs-set file, got {df.kind}")
    return df.obj.with_claim(df.claimed_lambda)


def _need(args: argparse.Namespace, *names: str) -> list[int]:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InvalidInputError(f"family {args.family!r} needs --{', --'.join(m.replace('_', '-') for m in missing)}")
    return [getattr(args, n) for n in names]


def _build(args: argparse.Namespace) -> FhsSet:
    fam = args.family
    if fam == "a":
        return C.construction_a(*_need(args, "p", "m", "u"))
    if fam == "tv":
        return C.construct_tv(*_need(args, "t", "v"))
    if fam == "threep":
        return C.construct_3p(*_need(args, "p")).fhs_set
    if fam == "cyclotomic":
        return C.bncdp_from_cyclotomic(*_need(args, "v", "e"))[1]
    if fam == "threev":
        return C.construct_3v(_need(args, "primes")[0])
    if fam == "vw":
        return C.construct_vw(*_need(args, "v", "e", "w", "e_prime"))
    if fam == "nv":
        return C.expand_fhs_set_by_cdm(_base_set(args.base), *_need(args, "w"))
    if fam == "kn":
        return C.concatenate_fold(_base_set(args.base), *_need(args, "t"), mode=args.mode)
    if fam == "qv":
        if not args.base:
            raise FixtureError("family 'qv' needs --base with a relative packing fixture")
        df = load(args.base)
        if not isinstance(df.obj, Bncrdp):
            raise FixtureError(f"--base must be a bncrdp file, got {df.kind}")
        return C.pipeline_qv(df.obj, *_need(args, "v", "e", "w", "e_prime"), base_params=df.parameters).fhs_set
    raise InvalidInputError(f"unknown family {fam!r}")


def cmd_construct(args: argparse.Namespace) -> int:
    s = _build(args)
    status = EXIT_OK
    if not args.no_verify:
        structural = _exhaustive_cost(s) > args.exhaustive_limit
        measured, _ = _measure(s, structural)
        if s.claimed_lambda is not None and measured > s.claimed_lambda:
            print(f"error: measured H(S)={measured} exceeds the claimed {s.claimed_lambda}", file=sys.stderr)
            status = EXIT_FAIL
        s = s.with_claim(measured if s.claimed_lambda is None else s.claimed_lambda)
    params = {"n": s.n, "M": s.M, "l": s.l}
    text = dumps(s, parameters=params)
    _emit(text, args.out)
    if args.out:
        print(f"{args.out}: ({s.n}, {s.M}, {s.claimed_lambda}; {s.l}) {content_hash(s)}")
    return status


# -- verify ----------------------------------------------------------------------

def _claim(name: str, expected: Any, observed: Any, ok: bool) -> dict[str, Any]:
    return {"name": name, "expected": expected, "observed": observed, "pass": bool(ok)}


def _verify_fhs(df: DesignFile, structural: bool) -> dict[str, Any]:
    s: FhsSet = df.obj  # type: ignore[assignment]
    measured, profile = _measure(s, structural)
    claims = []
    if df.claimed_lambda is not None:
        claims.append(_claim("lambda", df.claimed_lambda, measured, measured <= df.claimed_lambda))
    for key, actual in (("n", s.n), ("M", s.M), ("l", s.l)):
        if key in df.parameters:
            claims.append(_claim(key, df.parameters[key], actual, df.parameters[key] == actual))
    report: dict[str, Any] = {"profile": profile}
    try:
        verdict = classify_parameters(s.n, s.M, s.l, measured)
    except InvalidInputError as exc:
        report["verdict"] = {"error": str(exc)}
    else:
        report["verdict"] = verdict.as_dict()
        if "optimal" in df.parameters:
            claims.append(_claim("optimal", df.parameters["optimal"], verdict.optimal,
                                 bool(df.parameters["optimal"]) == verdict.optimal))
    report["claims"] = claims
    return report


def _check_dict(check) -> dict[str, Any]:
    return {"ok": check.ok, "reason": check.reason, "max_count": check.max_count,
            "residue": check.residue, "where": list(check.where)}


def _verify_design(df: DesignFile) -> dict[str, Any]:
    obj, lam = df.obj, df.claimed_lambda
    claims = []
    if isinstance(obj, Cdm):
        check = verify_cdm(obj)
        claims.append(_claim("difference-matrix", True, check.ok, check.ok))
    elif isinstance(obj, BlockFamily):
        if lam is None:
            raise SchemaError("a block-family file needs claimed.lambda")
        check = verify_cdp(obj, lam)
        claims.append(_claim("lambda", lam, check.max_count, check.ok))
    elif isinstance(obj, Bncdp):
        if lam is None:
            check = verify_bncdp(obj, bncdp_index(obj))
        else:
            check = verify_bncdp(obj, lam)
            claims.append(_claim("lambda", lam, check.max_count, check.ok))
    else:
        assert isinstance(obj, Bncrdp)
        if lam is None:
            raise SchemaError("a bncrdp file needs claimed.lambda")
        check = verify_bncrdp(obj, lam)
        claims.append(_claim("lambda", lam, check.max_count, check.ok))
    return {"check": _check_dict(check), "claims": claims}


def cmd_verify(args: argparse.Namespace) -> int:
    df = load(args.input)
    start = time.perf_counter()
    if df.kind == "fhs-set":
        body = _verify_fhs(df, args.structural)
    else:
        body = _verify_design(df)
    report: dict[str, Any] = {"input": {"kind": df.kind, "hash": df.content_hash}, **body}
    report["pass"] = all(c["pass"] for c in report["claims"])
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - start, 6)
    text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text)
    return EXIT_OK if report["pass"] else EXIT_FAIL


# -- bounds ----------------------------------------------------------------------

def cmd_bounds(args: argparse.Namespace) -> int:
    n, M, l = args.n, args.M, args.l
    if min(n, M, l) < 1:
        raise InvalidInputError(f"n, M, l must be positive, got ({n}, {M}, {l})")
    eps = n % l
    i_val = n * M // l
    rows: list[tuple[str, Any, str]] = [
        ("lempel-greenberger", lempel_greenberger(n, l) if n >= 2 else None, f"eps={eps}"),
        ("lempel-greenberger-simplified", simplified_lempel_greenberger(n, l), ""),
    ]
    first, second = peng_fan(n, M, l)
    rows += [("peng-fan-first", first, ""), ("peng-fan-second", second, f"I={i_val}")]
    try:
        sb = simplified_peng_fan(n, M, l)
        rows.append(("peng-fan-simplified", sb.bound, f"k={sb.k} eps={sb.eps}"))
    except NotApplicableError:
        rows.append(("peng-fan-simplified", None, "needs M > 1"))
    out: dict[str, Any] = {"n": n, "M": M, "l": l, "bounds": {name: val for name, val, _ in rows}}
    if args.lam is not None:
        out["verdict"] = classify_parameters(n, M, l, args.lam).as_dict()
    if args.json:
        sys.stdout.write(json.dumps(out, sort_keys=True, indent=1) + "\n")
        return EXIT_OK
    print(f"n={n} M={M} l={l}")
    for name, val, note in rows:
        shown = "n/a" if val is None else str(val)
        print(f"{name:32s}{shown:>8s}  {note}".rstrip())
    if args.lam is not None:
        print(f"lambda={args.lam}: {out['verdict']['classification']}")
    return EXIT_OK


# -- export / import -------------------------------------------------------------

def cmd_export(args: argparse.Namespace) -> int:
    df = load(args.input)
    if not isinstance(df.obj, FhsSet):
        raise InvalidInputError(f"only fhs-set files can be exported, got {df.kind}")
    s = df.obj.with_claim(df.claimed_lambda)
    _emit(to_csv(s) if args.format == "csv" else to_rows(s), args.out)
    return EXIT_OK


def cmd_import(args: argparse.Namespace) -> int:
    s = from_csv(Path(args.input).read_text())
    _emit(dumps(s, parameters={"n": s.n, "M": s.M, "l": s.l}, provenance={}), args.out)
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    width = max(len(i.tag) for i in C.CATALOG)
    for info in C.CATALOG:
        print(f"{info.tag:{width}s}  params: {', '.join(info.params)}")
        print(f"{'':{width}s}  gives:  {info.parameters}")
        print(f"{'':{width}s}  needs:  {info.constraints}")
    return EXIT_OK


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fhsets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build an FHS set and write it as JSON")
    c.add_argument("family", choices=[i.tag for i in C.CATALOG])
    for name in ("p", "m", "u", "t", "v", "e", "w"):
        c.add_argument(f"--{name}", type=int)
    c.add_argument("--e-prime", dest="e_prime", type=int)
    c.add_argument("--primes", type=int, nargs="+")
    c.add_argument("--base", help="input file for nv, kn and qv")
    c.add_argument("--mode", choices=("interleave", "concatenate"), default="interleave", help="kn only")
    c.add_argument("-o", "--out", help="output path (default: stdout)")
    c.add_argument("--no-verify", action="store_true", help="skip the correlation check after construction")
    c.add_argument("--exhaustive-limit", type=int, default=EXHAUSTIVE_LIMIT,
                   help="symbol comparisons above which verification is structural")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check the claims recorded in a design file")
    v.add_argument("input")
    v.add_argument("--report", help="also write the report here")
    v.add_argument("--structural", action="store_true", help="measure FHS sets through their packing")
    v.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", help="print the correlation lower bounds for (n, M, l)")
    b.add_argument("n", type=int)
    b.add_argument("M", type=int)
    b.add_argument("l", type=int)
    b.add_argument("--lambda", dest="lam", type=int, help="classify this correlation value")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bounds)

    x = sub.add_parser("export", help="write an FHS set as CSV or plain rows")
    x.add_argument("input")
    x.add_argument("--format", choices=("csv", "rows"), default="csv")
    x.add_argument("-o", "--out")
    x.set_defaults(func=cmd_export)

    i = sub.add_parser("import", help="read a CSV export back into a JSON file")
    i.add_argument("input")
    i.add_argument("-o", "--out")
    i.set_defaults(func=cmd_import)

    k = sub.add_parser("catalog", help="list the construction families and their constraints")
    k.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, UnsupportedParametersError, NotApplicableError, FixtureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ConstructionError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
