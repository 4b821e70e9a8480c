"""Command-line interface.

Exit codes: 0 when a result was computed (whatever it says), 1 for usage and
parse errors, 2 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import classification, clones
from .interpolation import InternalError, split_interpolant, SYNTHESIS_STANDARDS
from .semantics import (
    STANDARDS,
    Inference,
    MissingAtomError,
    Standard,
    evaluate,
    format_valuation,
    parse_valuation,
    valid,
)
from .syntax import ParseError, parse, to_text
from .truth import all_schemes, get_scheme

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _scheme(text: str):
    try:
        return get_scheme(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _standard(text: str) -> Standard:
    try:
        return Standard.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON record instead of text")
    common.add_argument("--jobs", type=_positive, default=1, metavar="N", help="worker processes for long sweeps")

    parser = _Parser(prog="trivalent", description="Three-valued logics and split interpolation.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula under a valuation")
    p.add_argument("--scheme", type=_scheme, required=True)
    p.add_argument("--valuation", required=True, help="e.g. p=1,q=1/2,r=0")
    p.add_argument("formula")

    p = sub.add_parser("check", parents=[common], help="decide validity of an inference")
    p.add_argument("--scheme", type=_scheme, required=True)
    p.add_argument("--standard", type=_standard, required=True)
    p.add_argument("inference", help='premises => conclusions, e.g. "p ; q => p & q"')

    p = sub.add_parser("interpolate", parents=[common], help="find a split interpolant")
    p.add_argument("--scheme", type=_scheme, required=True)
    p.add_argument("--std1", type=_standard, required=True)
    p.add_argument("--std2", type=_standard, required=True)
    p.add_argument("phi")
    p.add_argument("psi")

    p = sub.add_parser("classify", parents=[common], help="classify (scheme, std1, std2) cells")
    p.add_argument("--scheme", type=_scheme)
    p.add_argument("--std1", type=_standard)
    p.add_argument("--std2", type=_standard)

    p = sub.add_parser("table", parents=[common], help="render a verdict table")
    p.add_argument("--kind", choices=classification.TABLE_KINDS, required=True)
    p.add_argument("--format", choices=classification.TABLE_FORMATS, default="text")

    sub.add_parser("schemes", parents=[common], help="list the sixteen schemes")

    p = sub.add_parser("clone", parents=[common], help="inspect the clone of a scheme")
    p.add_argument("--scheme", type=_scheme, required=True)
    p.add_argument("--arity", type=_positive, default=1)
    p.add_argument("--dump", action="store_true", help="print every element with its witness")
    return parser


# ---------------------------------------------------------------------------
# commands


def _cmd_eval(args) -> tuple[dict[str, Any], str]:
    v = parse_valuation(args.valuation)
    f = parse(args.formula)
    value = evaluate(args.scheme, v, f)
    record = {"scheme": args.scheme.name, "valuation": format_valuation(v), "formula": to_text(f), "value": str(value)}
    return record, f"{value}\n"


def _cmd_check(args) -> tuple[dict[str, Any], str]:
    inf = Inference.parse(args.inference)
    verdict = valid(args.scheme, args.standard, inf)
    counter = format_valuation(verdict.counter) if verdict.counter is not None else None
    record = {
        "scheme": args.scheme.name,
        "standard": str(args.standard),
        "inference": str(inf),
        "valid": verdict.valid,
        "counter": counter,
    }
    text = "valid\n" if verdict.valid else f"invalid\ncounter: {counter}\n"
    return record, text


def _cmd_interpolate(args) -> tuple[dict[str, Any], str]:
    phi, psi = parse(args.phi), parse(args.psi)
    if args.std1 in SYNTHESIS_STANDARDS[0] and args.std2 in SYNTHESIS_STANDARDS[1]:
        result = split_interpolant(args.scheme, args.std1, args.std2, phi, psi)
        record = result.to_record()
    else:
        record = _exact_search(args.scheme, args.std1, args.std2, phi, psi)

    lines = [f"outcome: {record['outcome']}"]
    if record.get("chi") is not None:
        lines.append(f"interpolant: {record['chi']}")
        lines.append(f"strategy: {record['strategy']}")
        lines.append(f"leg 1 ({args.std1}): {'valid' if record['ss_leg'] else 'invalid'}")
        lines.append(f"leg 2 ({args.std2}): {'valid' if record['tt_leg'] else 'invalid'}")
    if record.get("counter"):
        lines.append(f"counter: {record['counter']}")
    block = record.get("block")
    if block and block["kind"] != "unblocked":
        lines.append(f"block: {block['kind']} at {block['witness']}")
    if record.get("certificate"):
        confirmed = " (confirmed by clone search)" if record.get("clone_confirmed") else ""
        lines.append(f"certificate: {record['certificate']}{confirmed}")
    return record, "\n".join(lines) + "\n"


def _exact_search(scheme, std1, std2, phi, psi) -> dict[str, Any]:
    # standards outside the constructions: decide by clone search only
    record: dict[str, Any] = {
        "outcome": None, "scheme": scheme.name, "std1": str(std1), "std2": str(std2),
        "phi": to_text(phi), "psi": to_text(psi), "strategy": None, "chi": None,
        "ss_leg": None, "tt_leg": None, "atoms_ok": None, "block": None,
        "certificate": None, "clone_confirmed": None, "counter": None, "fallback": False, "stats": {},
    }
    shared = clones.shared_atoms(phi, psi)
    if not shared:
        record["outcome"] = "no_shared_atoms"
        return record
    if len(shared) > clones.arity_cap():
        record["outcome"] = "unsupported"
        return record
    existence = clones.interpolant_exists(scheme, std1, std2, phi, psi)
    record["stats"] = {"clone_elements": existence.checked}
    if existence.exists:
        record.update(outcome="interpolant", strategy="clone-search", chi=to_text(existence.witness),
                      ss_leg=True, tt_leg=True, atoms_ok=True)
    else:
        record.update(outcome="no_interpolant", certificate="clone-none", clone_confirmed=True)
    return record


def _cmd_classify(args) -> tuple[dict[str, Any], str]:
    schemes = [args.scheme] if args.scheme else list(all_schemes())
    firsts = [args.std1] if args.std1 else list(STANDARDS)
    seconds = [args.std2] if args.std2 else list(STANDARDS)
    if args.std1 is None and args.std2 is None:
        verdicts = classification.classify_all(schemes=schemes, jobs=args.jobs)
    else:
        verdicts = [
            classification.classify_cell(classification.Cell(s, a, b))
            for s in schemes for a in firsts for b in seconds
        ]
    lines = []
    for v in verdicts:
        line = f"{v.cell.scheme.name} {v.cell.std1}/{v.cell.std2} {v.status.value}"
        if v.certificate is not None:
            line += f"  {to_text(v.phi)} => {to_text(v.psi)} [{v.certificate.kind}]"
        elif v.suite is not None:
            line += f"  {v.suite.pairs} corpus pairs"
        lines.append(line)
    record = {"verdicts": [v.to_record() for v in verdicts]}
    return record, "\n".join(lines) + "\n"


def _cmd_table(args) -> tuple[dict[str, Any], str]:
    text = classification.render_table(args.kind, args.format, jobs=args.jobs)
    return {"kind": args.kind, "format": args.format, "table": text}, text


def _cmd_schemes(args) -> tuple[dict[str, Any], str]:
    symbols = {"and": "∧", "or": "∨"}
    rows, lines = [], []
    for s in all_schemes():
        cells = s.unsettled_cells()
        rows.append({
            "name": s.name,
            "cells": [{"op": op, "args": [str(a), str(b)], "value": str(value)} for op, a, b, value in cells],
        })
        shown = "  ".join(f"{a}{symbols[op]}{b}={value}" for op, a, b, value in cells)
        lines.append(f"{s.name:<8} {shown}")
    return {"schemes": rows}, "\n".join(lines) + "\n"


def _cmd_clone(args) -> tuple[dict[str, Any], str]:
    clone = clones.clone_closure(args.scheme, args.arity)
    record: dict[str, Any] = {
        "scheme": args.scheme.name,
        "arity": args.arity,
        "atoms": list(clone.atoms),
        "elements": len(clone),
    }
    lines = [f"{args.scheme.name} arity {args.arity}: {len(clone)} elements"]
    if args.dump:
        record["table"] = [{"out": [str(x) for x in e.out], "witness": to_text(e.witness)} for e in clone]
        for e in clone:
            lines.append(f"{' '.join(f'{str(x):>3}' for x in e.out)}  {to_text(e.witness)}")
    return record, "\n".join(lines) + "\n"


_COMMANDS = {
    "eval": _cmd_eval,
    "check": _cmd_check,
    "interpolate": _cmd_interpolate,
    "classify": _cmd_classify,
    "table": _cmd_table,
    "schemes": _cmd_schemes,
    "clone": _cmd_clone,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        record, text = _COMMANDS[args.command](args)
    except (ParseError, MissingAtomError, clones.ArityCapExceeded, ValueError) as exc:
        print(f"trivalent {args.command}: {exc}", file=stderr)
        return EXIT_USAGE
    except (InternalError, AssertionError) as exc:
        print(f"trivalent {args.command}: internal error: {exc}", file=stderr)
        return EXIT_INTERNAL
    if args.json:
        stdout.write(json.dumps(record, ensure_ascii=False, indent=2) + "\n")
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    sys.exit(run())


if __name__ == "__main__":
    main()
