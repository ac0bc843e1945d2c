"""Command line interface: ``amphicheck check`` and ``amphicheck gen``.

Exit codes of ``check``: 0 when every record is CONSISTENT, 1 when any is
OBSTRUCTED, 2 when any has a DATA_ERROR (or the input cannot be read).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .families import FamilySpec
from .linkdata import RecordError, dumps_records, parse_index_key
from .obstruction import DEFAULT_MAX_R
from .report import TEST_GROUPS, emit_report, run_battery

MAX_R_ENV = "AMPHICHECK_MAX_R"


def parse_eps(text: str) -> tuple[int, ...]:
    """``"+-+"`` or ``"1,-1,1"`` -> ``(1, -1, 1)``."""
    text = text.strip()
    if text and set(text) <= {"+", "-"}:
        return tuple(1 if c == "+" else -1 for c in text)
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sign vector {text!r}") from None
    if not values or any(v not in (1, -1) for v in values):
        raise argparse.ArgumentTypeError(f"sign vector entries must be +1/-1: {text!r}")
    return values


def parse_sign_mode(text: str):
    """``exists`` -> None; ``fixed[:J=s;J=s...]`` -> dict of signs.

    ``J`` is a comma-joined index set and ``s`` is ``+``, ``-``, ``1`` or
    ``-1``; unlisted sets keep sign +1.
    """
    if text == "exists":
        return None
    if text == "fixed":
        return {}
    if not text.startswith("fixed:"):
        raise argparse.ArgumentTypeError(f"sign mode must be 'exists' or 'fixed:<spec>', got {text!r}")
    signs = {}
    body = text[len("fixed:"):].strip()
    if body in ("", "trivial"):
        return signs
    for item in body.split(";"):
        key, _, value = item.partition("=")
        value = value.strip()
        if value in ("+", "+1", "1"):
            s = 1
        elif value in ("-", "-1"):
            s = -1
        else:
            raise argparse.ArgumentTypeError(f"bad sign in {item!r}")
        try:
            signs[parse_index_key(key.strip())] = s
        except RecordError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return signs


def parse_tests(text: str) -> list[str]:
    groups = [t.strip() for t in text.split(",") if t.strip()]
    bad = [g for g in groups if g not in TEST_GROUPS]
    if bad:
        raise argparse.ArgumentTypeError(
            f"unknown tests {', '.join(bad)}; choose from {', '.join(TEST_GROUPS)}")
    return groups


def max_r_from_env() -> int:
    value = os.environ.get(MAX_R_ENV)
    if not value:
        return DEFAULT_MAX_R
    try:
        return int(value)
    except ValueError:
        raise SystemExit(f"{MAX_R_ENV} must be an integer, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amphicheck",
        description="Alexander-polynomial obstructions to amphicheirality of links.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run the test battery on a JSON file of link records")
    check.add_argument("file")
    check.add_argument("--tests", type=parse_tests, default=None,
                       help=f"comma-separated subset of: {','.join(TEST_GROUPS)}")
    check.add_argument("--eps", type=parse_eps, action="append", default=[],
                       metavar="VECTOR", help="sign vector for the eps-symmetry test, e.g. +-+")
    check.add_argument("--sign-mode", type=parse_sign_mode, default=None, metavar="MODE",
                       help="'exists' (default) or 'fixed:<J>=<s>;...' e.g. fixed:1,2=-;1,2,3=+")
    check.add_argument("--format", choices=("text", "json"), default="text")

    gen = sub.add_parser("gen", help="emit records of an example family as JSON")
    gen.add_argument("family", help="milnor | two-bridge | borromean | whitehead | fixture")
    gen.add_argument("params", nargs="*", help="milnor: LAMBDA; two-bridge: A B; fixture: NAME")
    gen.add_argument("-o", "--output", default=None)
    return parser


def _cmd_check(args) -> int:
    try:
        report = run_battery(args.file, args.tests, args.eps, args.sign_mode, max_r_from_env())
    except (OSError, json.JSONDecodeError, RecordError) as exc:
        print(f"amphicheck: {exc}", file=sys.stderr)
        return 2
    print(emit_report(report, args.format))
    return report.exit_code


def _cmd_gen(args) -> int:
    params = tuple(args.params)
    try:
        if args.family in ("milnor", "two-bridge", "two_bridge"):
            params = tuple(int(p) for p in params)
        rec = FamilySpec(args.family, params).generate()
    except (ValueError, KeyError) as exc:
        print(f"amphicheck: {exc}", file=sys.stderr)
        return 2
    text = dumps_records([rec])
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check":
        return _cmd_check(args)
    return _cmd_gen(args)


if __name__ == "__main__":
    sys.exit(main())
