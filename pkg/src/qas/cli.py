"""Command-line entry point: ``qas <subcommand> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad input or usage.
Primary output goes to stdout as JSON (or CSV for ``resources``); errors are
one line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .arithmetic import add, multiply
from .axioms import (
    FamilyError,
    abstract_model,
    axioms_to_json,
    check_arithmetic_axioms,
    check_family,
    construct_numbering,
    load_family,
)
from .grover import grover_iterate, parse_target
from .ledger import ResourceLedger
from .physical import (
    LabelError,
    LabelModel,
    PhysicalBasisState,
    load_model,
    physical_model,
    w_inverse,
    w_map,
)
from .register import DigitString, RegisterShape, ShapeError, encode, value
from .resources import scaling_report
from .shor import ShorError, default_labels, shor_pipeline
from .successor import successor

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # single-line diagnostic instead of the usage dump
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(payload, args, out: str | None = None) -> None:
    text = json.dumps(payload, indent=2 if args.pretty else None, sort_keys=False)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _operand(text: str, k: int, L: int, digits: bool) -> int:
    if digits:
        return value(DigitString.parse(text, k, L))
    try:
        n = int(text)
    except ValueError:
        raise UsageError(f"operand {text!r} is not a decimal integer (use --digits for digit strings)") from None
    if not 0 <= n < k**L:
        raise UsageError(f"operand {n} outside [0, {k**L - 1}] for k={k}, L={L}")
    return n


def _shape_result(op: str, args, inputs: list[int], outputs: list[int], ledger: ResourceLedger) -> dict:
    k, L = args.k, args.L
    return {
        "op": op,
        "k": k,
        "L": L,
        "inputs": inputs,
        "outputs": outputs,
        "output": outputs[-1],
        "output_digits": encode(outputs[-1], (k, L)).display(),
        "ledger": ledger.as_dict(),
    }


def cmd_add(args) -> int:
    s, w = (_operand(x, args.k, args.L, args.digits) for x in args.operands)
    ledger = ResourceLedger()
    out = add(args.k, args.L, s, w, ledger)
    _emit(_shape_result("plus", args, [s, w], [s, out], ledger), args)
    return EXIT_OK


def cmd_mul(args) -> int:
    s, w = (_operand(x, args.k, args.L, args.digits) for x in args.operands)
    ledger = ResourceLedger()
    out = multiply(args.k, args.L, s, w, ledger)
    _emit(_shape_result("times", args, [s, w], [s, w, 0, out], ledger), args)
    return EXIT_OK


def cmd_succ(args) -> int:
    s = _operand(args.operand, args.k, args.L, args.digits)
    shape = RegisterShape(args.k, args.L)
    if not 1 <= args.j <= args.L:
        raise UsageError(f"--j {args.j} outside 1..{args.L}")
    ledger = ResourceLedger()
    out = successor(shape, args.j).count(s, ledger)
    payload = _shape_result("successor", args, [s], [out], ledger)
    payload["j"] = args.j
    _emit(payload, args)
    return EXIT_OK


def _model(path: str | None) -> LabelModel | None:
    return load_model(path) if path else None


def cmd_axioms(args) -> int:
    m = _model(args.model)
    if m is not None:
        model = physical_model(m)
    else:
        if args.k is None or args.L is None:
            raise UsageError("axioms needs --k and --L, or --model")
        model = abstract_model(args.k, args.L)
    results = check_arithmetic_axioms(model)
    payload = {"k": model.k, "L": model.L, "model": model.name, **axioms_to_json(results)}
    _emit(payload, args, args.out)
    return EXIT_OK if payload["passed"] else EXIT_FAIL


def cmd_family_check(args) -> int:
    family = load_family(args.path)
    report = check_family(family)
    payload = {"k": family.k, "dimension": family.dimension, "labels": family.labels, **report.to_json()}
    if report.passed and report.chain_complete:
        payload["ordering"] = list(report.chain)
        numbering = construct_numbering(family, args.zero)
        payload["numbering"] = {"zero": args.zero, "images": [int(x) for x in numbering.images]}
    _emit(payload, args, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _physical_state(text: str, m: LabelModel) -> PhysicalBasisState:
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"state JSON: column {exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise UsageError("state JSON must map site labels to value labels")
        return PhysicalBasisState(data)
    return parse_target(m.labels, text)


def cmd_encode(args) -> int:
    m = load_model(args.model)
    n = _operand(args.number, m.k, m.L, args.digits)
    s = encode(n, (m.k, m.L))
    t = w_map(m, s)
    _emit({"number": n, "digits": s.display(), "state": t.to_json(), "index": t.index(m.labels)}, args)
    return EXIT_OK


def cmd_decode(args) -> int:
    m = load_model(args.model)
    t = _physical_state(args.state, m)
    s = w_inverse(m, t)
    _emit({"state": t.to_json(), "index": t.index(m.labels), "number": value(s), "digits": s.display()}, args)
    return EXIT_OK


def cmd_grover(args) -> int:
    m = _model(args.model)
    if m is not None:
        labels = m.labels
        if args.L is not None and args.L != labels.L:
            raise UsageError(f"--L {args.L} disagrees with the model's {labels.L} sites")
    else:
        if args.L is None:
            raise UsageError("grover needs --L or --model")
        labels = default_labels(args.L)
    target = parse_target(labels, args.target)
    run = grover_iterate(labels, target, args.iters, m)
    _emit(run.to_json(), args)
    return EXIT_OK


def cmd_shor(args) -> int:
    if args.trials < 0:
        raise UsageError(f"--trials must be non-negative, got {args.trials}")
    run = shor_pipeline(
        args.m, args.M, _model(args.model), _model(args.decode_model), seed=args.seed, trials=args.trials
    )
    _emit(run.to_json(), args)
    return EXIT_OK


def cmd_resources(args) -> int:
    report = scaling_report(args.kmax, args.Lmax)
    csv_text = report.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text)
        _emit({"out": args.out, **report.summary()}, args)
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent JSON output")

    p = _Parser(prog="qas", description="Digit-register arithmetic on permutation operators.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def shape_args(sp, required=True):
        sp.add_argument("--k", type=int, required=required, help="digit base")
        sp.add_argument("--L", type=int, required=required, help="digits per register")

    for name, fn, helptext in (("add", cmd_add, "s + w mod k^L"), ("mul", cmd_mul, "s * w mod k^L")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        shape_args(sp)
        sp.add_argument("--digits", action="store_true", help="operands are digit strings, most significant first")
        sp.add_argument("operands", nargs=2, metavar="N")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("succ", parents=[common], help="apply V_j to one register")
    shape_args(sp)
    sp.add_argument("--j", type=int, default=1)
    sp.add_argument("--digits", action="store_true")
    sp.add_argument("operand", metavar="N")
    sp.set_defaults(func=cmd_succ)

    sp = sub.add_parser("axioms", parents=[common], help="exhaustive arithmetic axiom check")
    shape_args(sp, required=False)
    sp.add_argument("--model", help="label model JSON; checks the induced physical operators")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_axioms)

    sp = sub.add_parser("family-check", parents=[common], help="check an operator family JSON")
    sp.add_argument("path")
    sp.add_argument("--zero", type=int, default=0, help="basis index used as the zero state")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_family_check)

    sp = sub.add_parser("encode", parents=[common], help="number -> physical basis state")
    sp.add_argument("--model", required=True)
    sp.add_argument("--digits", action="store_true")
    sp.add_argument("number")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", parents=[common], help="physical basis state -> number")
    sp.add_argument("--model", required=True)
    sp.add_argument("state", help="JSON {site: value} or value indices, last listed site first")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("grover", parents=[common], help="Grover search on the physical space")
    sp.add_argument("--L", type=int)
    sp.add_argument("--target", required=True)
    sp.add_argument("--iters", type=int, required=True)
    sp.add_argument("--model")
    sp.set_defaults(func=cmd_grover)

    sp = sub.add_parser("shor", parents=[common], help="desk-scale period finding")
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--model")
    sp.add_argument("--decode-model")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=100)
    sp.set_defaults(func=cmd_shor)

    sp = sub.add_parser("resources", parents=[common], help="step-count scaling CSV")
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--Lmax", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_resources)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ShapeError, LabelError, FamilyError, ShorError, ValueError, KeyError, OSError) as exc:
        msg = str(exc).replace("\n", " ")
        print(f"qas {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
