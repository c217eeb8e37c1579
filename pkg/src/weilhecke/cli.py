"""Command line interface.

Subcommands: discform, rho, hecke, theta, eigen, verify.  All file formats
are JSON with exact fractions as strings; floating point appears only in
explicitly marked *_approx fields.  Exit codes: 0 success, 2 parse error,
3 precondition violation, 4 precision shortfall, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arith import divisors
from .errors import DomainError, ParseError, PrecisionError, VerificationError
from .finquad import DiscForm
from .hecke import FourierExpansion, apply_T_general, apply_T_p2_even, apply_T_p2_odd, eigenvalue
from .metaplectic import MetaElem, Word
from .theta import LatticeSpec, theta_series
from .verify import run_verification
from .weil import rho, rho_qn

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_PRECISION = 4
EXIT_VERIFY = 5


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _dump_json(obj, path: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_discform(obj: dict) -> DiscForm:
    try:
        return DiscForm.from_json(obj)
    except KeyError as exc:
        raise ParseError(f"missing field in discriminant form input: {exc}") from exc


def cmd_discform(args) -> int:
    obj = _load_json(args.input)
    df = _load_discform(obj)
    out = df.to_json()
    out["gauss_sums"] = {
        str(d): df.gauss_sum(d).to_json() for d in divisors(df.level)
    }
    _dump_json(out, args.output)
    return EXIT_OK


def _parse_matrix_arg(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ParseError("matrix must be given as 'a,b,c,d'")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ParseError(f"matrix entries must be integers: {exc}") from exc


def _parse_word_arg(text: str) -> Word:
    tokens: list[tuple] = []
    for raw in text.split():
        if raw == "S":
            tokens.append(("S",))
        elif raw.startswith("Z"):
            tokens.append(("Z", int(raw[1:] or "1")))
        elif raw.startswith("T"):
            tokens.append(("T", int(raw[1:] or "1")))
        else:
            raise ParseError(f"unknown word token {raw!r}")
    return Word(tuple(tokens))


def cmd_rho(args) -> int:
    obj = _load_json(args.input)
    df = _load_discform(obj)
    if args.matrix is not None:
        a, b, c, d = _parse_matrix_arg(args.matrix)
        mat = rho(df, MetaElem(a, b, c, d, args.sign))
    elif args.word is not None:
        g = _parse_word_arg(args.word).evaluate()
        mat = rho(df, g)
    elif args.qn is not None:
        a, b, c, d = _parse_matrix_arg(args.qn)
        if args.unit is None:
            raise ParseError("--qn requires --unit r")
        mat, lift = rho_qn(df, [[a, b], [c, d]], args.unit)
    else:
        raise ParseError("one of --matrix, --word, --qn is required")
    _dump_json(mat.to_json(approx=args.approx), args.output)
    return EXIT_OK


def cmd_theta(args) -> int:
    obj = _load_json(args.input)
    if "gram" not in obj:
        raise ParseError("theta input needs a 'gram' field")
    lat = LatticeSpec(obj["gram"])
    f = theta_series(lat, Fraction(args.nmax))
    _dump_json(f.to_json(), args.output)
    return EXIT_OK


def cmd_hecke(args) -> int:
    obj = _load_json(args.input)
    try:
        f = FourierExpansion.from_json(obj)
    except KeyError as exc:
        raise ParseError(f"missing field in expansion input: {exc}") from exc
    out_prec = Fraction(args.out_prec) if args.out_prec else None
    if args.route == "general":
        g = apply_T_general(f, args.m, out_prec)
    else:
        if f.df.signature % 2 == 0:
            g = apply_T_p2_even(f, args.m)
        else:
            g = apply_T_p2_odd(f, args.m)
        if out_prec is not None:
            g = g.truncate(out_prec)
    _dump_json(g.to_json(), args.output)
    return EXIT_OK


def cmd_eigen(args) -> int:
    obj = _load_json(args.input)
    try:
        f = FourierExpansion.from_json(obj)
    except KeyError as exc:
        raise ParseError(f"missing field in expansion input: {exc}") from exc
    primes = [int(p) for p in args.primes.split(",") if p.strip()]
    table = []
    for p in primes:
        g = apply_T_general(f, p)
        lam = eigenvalue(f.truncate(g.prec), g)
        if lam is None:
            raise DomainError(f"input is not a T({p}^2)* eigenform at precision {g.prec}")
        rat = lam.as_rational()
        entry = {
            "p": p,
            "lambda": str(rat) if rat is not None else lam.to_json(),
            "lambda_approx": [lam.embed().real, lam.embed().imag],
        }
        table.append(entry)
    _dump_json({"weight": str(f.weight), "eigenvalues": table}, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verification()
    for rec in report:
        status = "PASS" if rec["ok"] else "FAIL"
        print(f"{status} {rec['name']}: {rec['detail']}")
    if args.report:
        _dump_json({"checks": report, "ok": all(r["ok"] for r in report)}, args.report)
    return EXIT_OK if all(r["ok"] for r in report) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="weilhecke",
        description="Exact discriminant forms, Weil representations and Hecke operators",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discform", help="Gram/orders JSON -> discriminant form JSON")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_discform)

    p = sub.add_parser("rho", help="evaluate the representation on a group element")
    p.add_argument("input", help="JSON file with gram or discform data")
    p.add_argument("--matrix", help="integer SL2 matrix 'a,b,c,d'")
    p.add_argument("--sign", type=int, default=1, choices=(1, -1))
    p.add_argument("--word", help="generator word, e.g. 'S T3 S Z2'")
    p.add_argument("--qn", help="matrix mod N 'a,b,c,d' (needs --unit)")
    p.add_argument("--unit", type=int, help="unit r with det = r^2 mod N")
    p.add_argument("--approx", action="store_true", help="add complex float rendering")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_rho)

    p = sub.add_parser("theta", help="Gram JSON -> theta series expansion JSON")
    p.add_argument("input")
    p.add_argument("--nmax", required=True, help="precision bound (fraction)")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_theta)

    p = sub.add_parser("hecke", help="apply T(m^2)* to an expansion")
    p.add_argument("input")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--route", choices=("general", "closed"), default="general")
    p.add_argument("--out-prec", help="requested output precision (fraction)")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_hecke)

    p = sub.add_parser("eigen", help="eigenvalue table of T(p^2)* operators")
    p.add_argument("input")
    p.add_argument("--primes", required=True, help="comma separated primes")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_eigen)

    p = sub.add_parser("verify", help="run the built-in verification suite")
    p.add_argument("--report", help="write a machine readable JSON report")
    p.set_defaults(fn=cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except DomainError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
