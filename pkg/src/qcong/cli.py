"""Command line entry point: ``qcong {expand,verify,scan,dissect,oracle}``.

Exit codes: 0 all checks pass, 1 mathematical counterexample, 2 usage or parse
error, 3 resource ceiling exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .congruences import (
    DEFAULT_SCAN_CEILING,
    CongruenceClaim,
    ScanCeilingError,
    ScanConfig,
    scan,
    select_catalog,
    verify_catalog,
    verify_claim,
)
from .dissections import SupportClaim, check, registry
from .eta import ParseError, expand, parse_product
from .partitions import (
    BRUTEFORCE_LIMIT,
    a_bruteforce,
    a_spec,
    a_table_recurrence,
    a_table_series,
)
from .series import EXACT, Mod

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2
EXIT_CEILING = 3

DEFAULT_TERMS = 2000
DEFAULT_JMAX = 3
HUMAN_ROW_LIMIT = 20


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    """``"3,5,7"`` or ``"3-7"`` or a mix: ``"2,5-7"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty integer list {text!r}")
    return tuple(out)


def _progression(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"progression must be 'A,B', got {text!r}") from None
    return a, b


def _emit(out, fmt, payload, human_lines, csv_rows=None):
    if fmt == "json":
        json.dump(payload, out, indent=2)
        out.write("\n")
    elif fmt == "csv" and csv_rows is not None:
        w = csv.writer(out, lineterminator="\n")
        w.writerows(csv_rows)
    else:
        for line in human_lines:
            out.write(line + "\n")


# -- expand ----------------------------------------------------------------------

def cmd_expand(args, out):
    ring = EXACT if args.mod is None else Mod(args.mod)
    if args.table:
        if args.table == "p":
            spec = a_spec(1)
        elif args.k is None:
            raise UsageError(f"--table {args.table} needs --k")
        elif args.table == "a":
            spec = a_spec(args.k)
        else:
            spec = parse_product(f"2^{args.k} * 1^-{args.k}")
        label = f"{args.table}" + ("" if args.k is None else f"(k={args.k})")
    elif args.spec is None:
        raise UsageError("expand needs a product spec or --table")
    else:
        spec = parse_product(args.spec)
        label = str(spec)
    s = expand(spec, ring, args.terms)
    coeffs = s.coeffs
    payload = {"spec": label, "ring": str(ring), "terms": args.terms, "coefficients": coeffs}
    rows = [("n", "value")] + list(enumerate(coeffs))
    _emit(out, args.format, payload, [f"{n}:{v}" for n, v in enumerate(coeffs)], rows)
    return EXIT_OK


# -- verify ----------------------------------------------------------------------

def _claims_from_args(args):
    if args.catalog is not None:
        try:
            return select_catalog(args.catalog)
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
    if args.claim_json is not None:
        text = args.claim_json
        if not text.lstrip().startswith(("{", "[")):
            with open(text) as fh:
                text = fh.read()
        data = json.loads(text)
        data = data if isinstance(data, list) else [data]
        return [(d.get("name", f"claim{i}"), CongruenceClaim.from_json(d)) for i, d in enumerate(data)]
    if args.k is None or args.prog is None or args.mod is None:
        raise UsageError("verify needs --catalog, --claim-json, or all of --k, --prog, --mod")
    A, B = args.prog
    claim = CongruenceClaim(k0=args.k, c=args.c, A=A, B=B, M=args.mod)
    return [(claim.describe(), claim)]


def cmd_verify(args, out):
    try:
        claims = _claims_from_args(args)
    except (ValueError, KeyError, OSError) as e:
        raise UsageError(f"malformed claim: {e}") from None
    for _, c in claims:
        if args.terms <= c.B:
            raise UsageError(f"--terms {args.terms} does not reach offset B = {c.B}")
    if args.catalog is not None:
        results = verify_catalog(args.terms, args.jmax, args.catalog, workers=args.threads)
    else:
        results = [(name, verify_claim(c, args.terms, args.jmax)) for name, c in claims]

    failed = [(name, r) for name, r in results if not r.verified]
    payload = [dict(name=name, **r.to_json()) for name, r in results]

    lines = []
    for name, r in results:
        if r.verified:
            lines.append(f"[ok]   {name}: verified for n <= {r.checked_n_up_to}, j <= {r.checked_j_up_to}")
    for name, r in failed[:HUMAN_ROW_LIMIT]:
        w = r.witness
        lines.append(f"[FAIL] {name}: counterexample j={w.j} k={w.k} n={w.n} residue={w.residue}")
    if len(failed) > HUMAN_ROW_LIMIT:
        lines.append(f"... {len(failed) - HUMAN_ROW_LIMIT} more counterexamples (use --format json)")
    lines.append(f"{len(results) - len(failed)}/{len(results)} claims verified to N = {args.terms}")

    header = ("name", "c", "k0", "A", "B", "M", "status", "checked_n_up_to", "checked_j_up_to",
              "witness_j", "witness_k", "witness_n", "witness_residue")
    rows = [header]
    for name, r in results:
        c, w = r.claim, r.witness
        wit = ("", "", "", "") if w is None else (w.j, w.k, w.n, w.residue)
        rows.append((name, c.c, c.k0, c.A, c.B, c.M, r.status, r.checked_n_up_to, r.checked_j_up_to) + wit)
    _emit(out, args.format, payload, lines, rows)
    return EXIT_COUNTEREXAMPLE if failed else EXIT_OK


# -- scan ------------------------------------------------------------------------

def _scan_config(args) -> ScanConfig:
    base = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    if args.k is not None:
        base["k"] = list(args.k)
    if args.mod is not None:
        base["moduli"] = list(args.mod)
    if args.A is not None:
        base["A"] = list(args.A)
    if args.B is not None:
        base["B"] = list(args.B)
    if args.terms is not None:
        base["N"] = args.terms
    if args.survivors_only:
        base["survivors_only"] = True
    if args.ceiling is not None:
        base["ceiling"] = args.ceiling
    base.setdefault("N", DEFAULT_TERMS)
    missing = [key for key in ("k", "A") if key not in base] + (
        [] if "moduli" in base or "M" in base else ["moduli"]
    )
    if missing:
        raise UsageError(f"scan grid is missing {', '.join(missing)}")
    return ScanConfig.from_json(base)


def cmd_scan(args, out):
    try:
        config = _scan_config(args)
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as e:
        raise UsageError(f"bad scan config: {e}") from None
    try:
        report = scan(config, workers=args.threads)
    except ScanCeilingError as e:
        print(f"error: {e} (raise it with --ceiling)", file=sys.stderr)
        return EXIT_CEILING
    except ValueError as e:
        raise UsageError(str(e)) from None

    data = report.to_json()
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")

    lines = [f"scanned {config.grid_size()} progressions to N = {config.n}; "
             f"{len(report.survivors)} survivors"]
    for e in report.survivors:
        tag = ", ".join(e.listed_as) if e.listed else "unlisted"
        lines.append(f"  k={e.k} M={e.M} A={e.A} B={e.B}  verified for n <= {e.checked_n_up_to}  [{tag}]")
    rows = [("k", "M", "A", "B", "status", "checked_n_up_to", "listed")]
    shown = report.survivors if config.survivors_only else report.entries
    for e in shown:
        rows.append((e.k, e.M, e.A, e.B, e.status, e.checked_n_up_to,
                     ("listed" if e.listed else "unlisted") if e.survived else ""))
    if args.format == "json" and args.output:
        lines = [f"report written to {args.output}"]
        _emit(out, "human", None, lines)
    else:
        _emit(out, args.format, data, lines, rows)
    return EXIT_OK


# -- dissect ---------------------------------------------------------------------

def cmd_dissect(args, out):
    reg = registry()
    if args.list:
        for name, item in reg.items():
            out.write(f"{name}\t{item.mode}\n")
        return EXIT_OK
    if args.all:
        names = list(reg)
    elif args.names:
        unknown = [n for n in args.names if n not in reg]
        if unknown:
            raise UsageError(f"unknown identity {', '.join(unknown)}; registry: {', '.join(reg)}")
        names = args.names
    else:
        raise UsageError("dissect needs identity names, --all, or --list")

    gating_failures = 0
    payload, lines = [], []
    for name in names:
        item = reg[name]
        n = args.terms
        if n is None:
            n = 2000 if isinstance(item, SupportClaim) else 1000
        r = check(item, n)
        negative = item.expect_failure
        if not r.ok and not (negative and args.all):
            gating_failures += 1
        d = r.to_json()
        if negative:
            d["negative_control"] = True
        payload.append(d)
        if r.ok:
            extra = "" if r.residues is None else f"  residues {{{', '.join(map(str, r.residues))}}}"
            note = "  (negative control unexpectedly holds)" if negative else ""
            lines.append(f"[ok]   {name} [{r.mode}] verified to N = {r.verified_to}{extra}{note}")
        else:
            m = r.mismatch
            what = " ".join(f"{k}={v}" for k, v in m.items())
            note = "  (negative control, expected)" if negative else ""
            lines.append(f"[FAIL] {name} [{r.mode}] mismatch at {what}{note}")
    rows = [("name", "mode", "verified_to", "mismatch")] + [
        (d["name"], d["mode"], d["verified_to"], "" if d["mismatch"] is None else json.dumps(d["mismatch"]))
        for d in payload
    ]
    _emit(out, args.format, payload, lines, rows)
    return EXIT_COUNTEREXAMPLE if gating_failures else EXIT_OK


# -- oracle ----------------------------------------------------------------------

def cmd_oracle(args, out):
    k, n = args.k, args.n
    if k < 1:
        raise UsageError("--k must be >= 1")
    if n < 0 or n > BRUTEFORCE_LIMIT:
        raise UsageError(f"oracle bound exceeded: n must be in [0, {BRUTEFORCE_LIMIT}]")
    brute = a_bruteforce(k, n)
    ser = a_table_series(k, EXACT, n + 1)[n]
    rec = a_table_recurrence(k, n + 1)[n]
    match = brute == ser == rec
    payload = {"k": k, "n": n, "bruteforce": brute, "series": ser, "recurrence": rec, "match": match}
    line = f"a_{k}({n}): {brute} / {ser} / {rec}  {'match' if match else 'MISMATCH'}"
    rows = [("k", "n", "bruteforce", "series", "recurrence", "match"), (k, n, brute, ser, rec, match)]
    _emit(out, args.format, payload, [line], rows)
    return EXIT_OK if match else EXIT_COUNTEREXAMPLE


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcong", description="Colored-partition congruence verification and search."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $QCONG_THREADS or min(4, cpus))")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="print coefficients of a q-product")
    p.add_argument("spec", nargs="?", help='eta quotient "2^2 * 1^-3" or Pochhammer "[2,3;5]/[1,4;5]"')
    p.add_argument("--terms", type=int, default=DEFAULT_TERMS)
    p.add_argument("--mod", type=int, default=None)
    p.add_argument("--table", choices=("p", "a", "distinct"), default=None,
                   help="named partition table instead of a spec")
    p.add_argument("--k", type=int, default=None, help="color count for --table a / distinct")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify", parents=[common], help="verify congruence claims")
    p.add_argument("--catalog", default=None, help="'all' or name prefixes, e.g. 'T1,T9,S5'")
    p.add_argument("--claim-json", default=None, help="claim JSON text or file")
    p.add_argument("--k", type=int, default=None, help="k0 (base color count)")
    p.add_argument("--c", type=int, default=0, help="family step: k = c*j + k0")
    p.add_argument("--prog", type=_progression, default=None, help="A,B for A*n+B")
    p.add_argument("--mod", type=int, default=None)
    p.add_argument("--terms", type=int, default=DEFAULT_TERMS)
    p.add_argument("--jmax", type=int, default=DEFAULT_JMAX)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", parents=[common], help="search a grid of progressions")
    p.add_argument("--config", default=None, help="JSON ScanConfig file; flags override it")
    p.add_argument("--k", type=_int_list, default=None)
    p.add_argument("--mod", type=_int_list, default=None)
    p.add_argument("--A", type=_int_list, default=None)
    p.add_argument("--B", type=_int_list, default=None, help="default: every B < A")
    p.add_argument("--terms", type=int, default=None)
    p.add_argument("--ceiling", type=int, default=None,
                   help=f"max grid size x N (default {DEFAULT_SCAN_CEILING:,})")
    p.add_argument("--survivors-only", action="store_true")
    p.add_argument("--output", default=None, help="write the JSON report here")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("dissect", parents=[common], help="check dissection identities")
    p.add_argument("names", nargs="*")
    p.add_argument("--all", action="store_true")
    p.add_argument("--list", action="store_true")
    p.add_argument("--terms", type=int, default=None,
                   help="default 1000 for identities, 2000 for support claims")
    p.set_defaults(func=cmd_dissect)

    p = sub.add_parser("oracle", parents=[common], help="compare the three a_k(n) routes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "terms", None) is not None and args.terms < 1:
        print("error: --terms must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except ParseError as e:
        print(f"error: {e.message} at column {e.column + 1}\n{e.pointer()}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout (for tests and notebooks)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
