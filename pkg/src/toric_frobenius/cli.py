"""Command-line front end.

    toricfrob classgroup builtin:projective_space(2)
    toricfrob decompose builtin:projective_space(1) --class 0 --ell 2
    toricfrob h0 fan.json --tdiv=2,0,0
    toricfrob verify builtin:weighted_p112 --ell 2,3 --box 3

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 cube/convolution mismatch, 4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classgroup import ClassGroup, DivisorClass, compute_class_group
from .fan import Fan, FanError, UnknownBuiltin, builtin_fan, is_complete, is_smooth, validate
from .frobenius import DEFAULT_BUDGET, AlgorithmMismatch, BudgetExceeded, decompose
from .sections import UNBOUNDED, h0
from .verify import SuiteConfig, run_suite

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_MISMATCH, EXIT_BUDGET = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


def parse_fan_json(doc) -> tuple[Fan, bool]:
    """Fan and ``assert_complete`` flag from a decoded fan document."""
    if not isinstance(doc, dict):
        raise InputError("fan file must be a JSON object")
    for key in ("dim", "rays", "max_cones"):
        if key not in doc:
            raise InputError(f"fan file is missing field {key!r}")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputError("field 'dim' must be a positive integer")
    for key in ("rays", "max_cones"):
        value = doc[key]
        if not isinstance(value, list) or not all(
                isinstance(v, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in v)
                for v in value):
            raise InputError(f"field {key!r} must be a list of integer lists")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise InputError("field 'name' must be a string")
    assert_complete = doc.get("assert_complete", False)
    if not isinstance(assert_complete, bool):
        raise InputError("field 'assert_complete' must be a boolean")
    fan = Fan.from_lists(dim, doc["rays"], doc["max_cones"], name=name)
    return fan, assert_complete


def load_fan(source: str) -> tuple[Fan, bool]:
    if source.startswith("builtin:"):
        return builtin_fan(source[len("builtin:"):]), False
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read fan file {source!r}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {source!r}: {exc}") from None
    fan, assert_complete = parse_fan_json(doc)
    if fan.name is None:
        fan = Fan(fan.dim, fan.rays, fan.max_cones, name=Path(source).stem)
    return fan, assert_complete


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"{what} must be comma-separated integers, got {text!r}") from None


def _source_class(args, cg: ClassGroup) -> DivisorClass:
    if args.tdiv is not None:
        d = _ints(args.tdiv, "--tdiv")
        if len(d) != cg.n_rays:
            raise InputError(f"--tdiv needs {cg.n_rays} coordinates, got {len(d)}")
        return cg.class_of(d)
    coords = _ints(args.cls, "--class")
    need = cg.rank + len(cg.torsion_orders)
    if len(coords) != need:
        raise InputError(
            f"--class needs {need} coordinates ({cg.rank} free then "
            f"{len(cg.torsion_orders)} torsion) for Cl = {cg.describe()}, got {len(coords)}")
    return cg.from_flat(coords)


def _short(c: DivisorClass) -> str:
    coords = c.free + c.torsion
    return str(coords[0]) if len(coords) == 1 else "(" + ",".join(map(str, coords)) + ")"


def _sheaf(c: DivisorClass) -> str:
    if not any(c.free + c.torsion):
        return "O"
    s = _short(c)
    return f"O{s}" if s.startswith("(") else f"O({s})"


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def cmd_classgroup(args) -> int:
    fan, _ = load_fan(args.fan)
    cg = compute_class_group(fan)
    gens = cg.generators()
    complete = is_complete(fan)
    payload = {
        "fan": fan.label,
        "rank": cg.rank,
        "torsion_orders": list(cg.torsion_orders),
        "generators": [g.to_json() for g in gens],
        "smooth": is_smooth(fan),
        "complete": "unknown" if complete is None else complete,
    }
    text = f"Cl = {cg.describe()}; L(e_i) = {','.join(_short(g) for g in gens)}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_decompose(args) -> int:
    fan, _ = load_fan(args.fan)
    cg = compute_class_group(fan)
    D = _source_class(args, cg)
    dec = decompose(cg, D, args.ell, algorithm=args.algorithm, budget=args.budget)
    payload = dec.to_json()
    payload["fan"] = fan.label
    summands = " + ".join(
        _sheaf(E) + (f"^{m}" if m > 1 else "") for E, m in sorted(dec.summands.items()))
    text = f"F_* {_sheaf(D)} = {summands}\nrank {dec.rank}"
    if dec.ell_shares_torsion:
        text += f"\nnote: ell={args.ell} shares a factor with a torsion order of Cl = {cg.describe()}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_h0(args) -> int:
    fan, _ = load_fan(args.fan)
    cg = compute_class_group(fan)
    D = _source_class(args, cg)
    value = h0(fan, cg, D)
    out = "unbounded" if value is UNBOUNDED else value
    _emit(args, {"fan": fan.label, "class": D.to_json(), "h0": out}, str(out))
    return EXIT_OK


def cmd_verify(args) -> int:
    fan, assert_complete = load_fan(args.fan)
    validate(fan).raise_if_invalid()
    ells = _ints(args.ell, "--ell")
    if not ells or any(e < 1 for e in ells):
        raise InputError("--ell needs positive integers")
    if args.box < 0:
        raise InputError("--box must be nonnegative")
    config = SuiteConfig(ells=tuple(ells), box=args.box,
                         assume_complete=assert_complete or args.assert_complete,
                         budget=args.budget)
    report = run_suite(fan, config)
    _emit(args, report.to_json(), report.table())
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="cube enumeration point budget (default 10^7)")

    parser = argparse.ArgumentParser(
        prog="toricfrob",
        description="Frobenius push-forwards of rank-one reflexive sheaves on toric varieties.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classgroup", parents=[common], help="show Cl X and the ray classes")
    p.add_argument("fan", help="fan JSON file or builtin:NAME")
    p.set_defaults(func=cmd_classgroup)

    def add_class_args(p):
        p.add_argument("fan", help="fan JSON file or builtin:NAME")
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--tdiv", help="T-divisor coordinates, one per ray (use --tdiv=-1,0 for negatives)")
        g.add_argument("--class", dest="cls",
                       help="class coordinates, free then torsion (use --class=-1 for negatives)")

    p = sub.add_parser("decompose", parents=[common], help="decompose F_* O(D)")
    add_class_args(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--algorithm", choices=("cube", "conv", "both"), default="conv")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("h0", parents=[common], help="count global sections of O(D)")
    add_class_args(p)
    p.set_defaults(func=cmd_h0)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("fan", help="fan JSON file or builtin:NAME")
    p.add_argument("--ell", default="2,3", help="comma-separated ell values (default 2,3)")
    p.add_argument("--box", type=int, default=3, help="free coordinates range over [-box, box]")
    p.add_argument("--assert-complete", action="store_true",
                   help="treat the fan as complete even if undecided")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "ell", None) is not None and isinstance(args.ell, int) and args.ell < 1:
        print("error: --ell must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, FanError, UnknownBuiltin) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AlgorithmMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
