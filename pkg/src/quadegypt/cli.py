"""Command-line front end.

Every command writes JSON lines to stdout.  A decomposition record looks like::

    {"schema_version": "1", "ring_d": -1, "input": "1+2*w",
     "terms": [{"sign": 1, "den": "w"}, ...], "recipe_tag": "...", "verified": true}

``verified`` is recomputed right before printing.  ``scan`` emits a header
record, one record per element that did not decompose cleanly (every element
with ``--all``) and a closing summary record; records are sorted by
``(norm, a, b)`` so the stream does not depend on ``--jobs``.

Exit codes: 0 success, 1 error or a false verification, 2 input in the
exceptional set.  ``QUADEGYPT_MAX_WORKERS`` caps ``--jobs``.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Optional, Sequence

from .decomp import Decomposition, DecompositionError, ExceptionalElementError, UnitFraction, decompose, pad_to_three
from .oracle import scan_conjecture, scan_theorem
from .pell import pell_identity, pell_xy
from .ring import OmegaKind, RingError, format_element, make_ring, parse_element
from .verify import verify

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EXCEPTIONAL = 2


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # "-1+2*w" and "-1/(w)" are values, not options
        self._negative_number_matcher = re.compile(r"^-[\dw(]")


def output_record(ring, n, dec: Decomposition) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "ring_d": ring.d,
        "input": format_element(n),
        "terms": [{"sign": t.sign, "den": format_element(t.den)} for t in dec.terms],
        "recipe_tag": dec.recipe_tag,
        "verified": verify(ring, n, dec),
    }


def _pretty(rec: dict) -> str:
    parts = []
    for i, t in enumerate(rec["terms"]):
        op = "-" if t["sign"] < 0 else ("+" if i else "")
        parts.append(f"{op} 1/({t['den']})".strip())
    status = "ok" if rec["verified"] else "NOT VERIFIED"
    return f"4/({rec['input']}) = {' '.join(parts)}    [{rec['recipe_tag']}; {status}]"


def _emit(rec: dict, pretty: bool = False) -> None:
    print(_pretty(rec) if pretty else json.dumps(rec))


def _fail(msg: str, code: int = EXIT_ERROR) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def parse_term(text: str, ring) -> UnitFraction:
    """``den``, ``1/den``, ``1/(den)``, ``-1/(den)`` or ``+1/(den)``."""
    s = text.strip()
    sign = 1
    m = re.match(r"^([+-])?\s*1\s*/\s*(.+)$", s)
    if m:
        sign = -1 if m.group(1) == "-" else 1
        s = m.group(2)
    return UnitFraction(sign, parse_element(s, ring))


def cmd_decompose(args) -> int:
    ring = make_ring(args.d)
    n = parse_element(args.element, ring)
    try:
        dec = decompose(ring, n)
    except ExceptionalElementError as exc:
        return _fail(str(exc), EXIT_EXCEPTIONAL)
    if args.pad_three:
        dec = pad_to_three(dec)
    rec = output_record(ring, n, dec)
    _emit(rec, args.pretty)
    return EXIT_OK if rec["verified"] else EXIT_ERROR


def cmd_verify(args) -> int:
    ring = make_ring(args.d)
    n = parse_element(args.element, ring)
    terms = tuple(parse_term(t, ring) for t in args.terms)
    if not 1 <= len(terms) <= 3:
        return _fail("give 1 to 3 terms")
    rec = output_record(ring, n, Decomposition(terms, "user"))
    _emit(rec, args.pretty)
    return EXIT_OK if rec["verified"] else EXIT_ERROR


def cmd_pell(args) -> int:
    ident = pell_identity(args.d, form="three" if args.three_term else "auto")
    ring = ident.ring
    rec = output_record(ring, ring.one, ident.decomposition())
    if ring.omega_kind is OmegaKind.SQRT:
        x, y = pell_xy(ident.z, ident.lead)
        rec["pell"] = {"x": x, "y": y, "holds": x * x - ring.d * y * y == 1}
    _emit(rec, args.pretty)
    return EXIT_OK if rec["verified"] else EXIT_ERROR


def cmd_scan(args) -> int:
    if args.conjecture:
        if args.d != -1:
            return _fail("--conjecture is a Z[i] scan (use --d=-1)")
        if args.den_bound is None:
            return _fail("--conjecture needs --den-bound")
        report = scan_conjecture(args.norm_bound, args.den_bound, jobs=args.jobs, keep_witnesses=args.all)
    else:
        report = scan_theorem(make_ring(args.d), args.norm_bound, jobs=args.jobs, keep_witnesses=args.all)
    sys.stdout.write(report.to_jsonl(emit_all=args.all))
    if not report.consistent:  # pragma: no cover
        return _fail("inconsistent scan counts")
    if report.failures and not args.conjecture:
        return EXIT_ERROR
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quadegypt", description="Unit-fraction decompositions of 4/n in quadratic integer rings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="decompose 4/n")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("element")
    p.add_argument("--pad-three", action="store_true", help="split terms until there are exactly three")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="check 4/n against given unit fractions")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("element")
    p.add_argument("terms", nargs="+", help='denominators: "x", "1/(x)" or "-1/(x)"')
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pell", help="identity 4 = 1/z + 1/conj(z) for d > 1")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--three-term", action="store_true", help="search 4 = 1 + 1/z + 1/conj(z) instead")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_pell)

    p = sub.add_parser("scan", help="exhaustive scan up to a norm bound")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--norm-bound", type=int, required=True)
    p.add_argument("--conjecture", action="store_true", help="cone-restricted search over Z[i]")
    p.add_argument("--den-bound", type=int, help="denominator norm bound for --conjecture")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--all", action="store_true", help="emit a record for every element")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RingError, ValueError, DecompositionError, ArithmeticError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
