"""Command line front end: ``pi <subcommand> ...``.

Exit status is 0 on success, 1 for a domain failure (type error, failed
proof, inequivalent programs, ...) and 2 for a usage problem.  Domain
failures print ``ERROR <kind>: <message>`` as the first line on stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from functools import singledispatch
from typing import Optional

from .errors import PiError
from .normalize import canonical_type, normalizer, size
from .permutation import PermDense, compile, is_perm_text, parse_perm, to_dense
from .rewrite import ProofReport, Rule, check_proof, parse_proof, rule_registry
from .semantics import DEFAULT_CAP, EquivReport, EvalTrace, compare, evaluate, trace
from .syntax import (
    Program,
    Ty,
    Unifier,
    adjoint,
    check,
    infer_term,
    parse_program,
    parse_type,
    parse_value,
)

CAP_VARIABLE = "PI_BRUTE_FORCE_CAP"


class UsageError(Exception):
    pass


class NotEquivalent(PiError):
    kind = "NotEquivalent"


class ProofRejected(PiError):
    kind = "ProofRejected"


# --------------------------------------------------------------------------
# result records and rendering


@dataclass(frozen=True)
class RunResult:
    value: object


@dataclass(frozen=True)
class Inverted:
    program: Program


@dataclass(frozen=True)
class Normalized:
    ty: Ty
    comb: object
    cod: Ty


@dataclass(frozen=True)
class RuleList:
    rules: tuple
    dump: bool


@singledispatch
def render(result, fmt: str = "text") -> str:
    raise TypeError(f"cannot render {type(result).__name__}")


@render.register
def _(result: PermDense, fmt: str = "text") -> str:
    if fmt == "json":
        return _json({"arity": result.n, "image": list(result.image)})
    return str(result)


@render.register
def _(result: EvalTrace, fmt: str = "text") -> str:
    if fmt == "json":
        return _json(
            [{"step": i, "combinator": str(c), "value": str(v)} for i, (c, v) in enumerate(result.steps, 1)]
        )
    return "\n".join(f"{c} |-> {v}" for c, v in result.steps)


@render.register
def _(result: RunResult, fmt: str = "text") -> str:
    if fmt == "json":
        return _json({"value": str(result.value)})
    return str(result.value)


@render.register
def _(result: Inverted, fmt: str = "text") -> str:
    p = result.program
    if fmt == "json":
        typ = None if p.dom is None else {"domain": str(p.dom), "codomain": str(p.cod)}
        return _json({"combinator": str(p.comb), "type": typ})
    return str(p).rstrip("\n")


@render.register
def _(result: EquivReport, fmt: str = "text") -> str:
    if fmt == "json":
        cex = None
        if result.counterexample is not None:
            v, w1, w2 = result.counterexample
            cex = {"input": str(v), "first": str(w1), "second": str(w2)}
        return _json(
            {"equivalent": result.equivalent, "agree": result.agree, "total": result.total, "counterexample": cex}
        )
    head = "equivalent" if result.equivalent else "not equivalent"
    text = f"{head} ({result.agree}/{result.total} values agree)"
    if result.counterexample is not None:
        v, w1, w2 = result.counterexample
        text += f"\nfirst difference: {v} |-> {w1} vs {w2}"
    return text


@render.register
def _(result: Normalized, fmt: str = "text") -> str:
    if fmt == "json":
        return _json({"type": str(result.ty), "combinator": str(result.comb), "codomain": str(result.cod)})
    return f"{result.comb}\n: {result.ty} <-> {result.cod}"


@render.register
def _(result: ProofReport, fmt: str = "text") -> str:
    if fmt == "json":
        return _json(
            {
                "accepted": result.accepted,
                "steps": result.steps,
                "failed_step": result.failed_step,
                "kind": result.kind or None,
                "message": result.message or None,
            }
        )
    return str(result)


@render.register
def _(result: RuleList, fmt: str = "text") -> str:
    if fmt == "json" or result.dump:
        return _json([rule_record(r) for r in result.rules])
    width = max(len(r.name) for r in result.rules)
    return "\n".join(f"{r.name:<{width}}  {r.lhs}  =>  {r.rhs}" for r in result.rules)


def rule_record(r: Rule) -> dict:
    return {
        "name": r.name,
        "base": r.base,
        "group": r.group,
        "line": r.line,
        "direction": r.direction,
        "lhs": str(r.lhs),
        "rhs": str(r.rhs),
        "roles": {m: f"{d} <-> {c}" for m, d, c in r.roles},
        "partner": r.partner_name,
    }


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# --------------------------------------------------------------------------
# commands


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_program(path: str) -> Program:
    return parse_program(_read(path))


def _domain(prog: Program, type_text: Optional[str], what: str) -> Ty:
    if type_text is not None:
        return parse_type(type_text)
    if prog.dom is not None:
        return prog.dom
    raise UsageError(f"{what}: no 'type:' header in the program, pass --in")


def cmd_run(args):
    prog = _load_program(args.file)
    value = parse_value(args.value)
    comb = adjoint(prog.comb) if args.reverse else prog.comb
    dom = None
    if args.type is not None:
        dom = parse_type(args.type)
    elif prog.dom is not None:
        dom, cod = (prog.cod, prog.dom) if args.reverse else (prog.dom, prog.cod)
        check(comb, dom, cod)
    if args.trace:
        return trace(comb, value, dom)
    return RunResult(evaluate(comb, value, dom))


def cmd_invert(args):
    prog = _load_program(args.file)
    if prog.dom is not None:
        check(prog.comb, prog.dom, prog.cod)
    return Inverted(Program(adjoint(prog.comb), prog.cod, prog.dom))


def cmd_perm(args):
    text = _read(args.file)
    if is_perm_text(text):
        return to_dense(parse_perm(text))
    prog = parse_program(text)
    dom = _domain(prog, args.type, "perm")
    if args.type is None and prog.cod is not None:
        check(prog.comb, dom, prog.cod)
    return compile(prog.comb, dom)


def _cap() -> int:
    raw = os.environ.get(CAP_VARIABLE)
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"{CAP_VARIABLE} must be an integer, not {raw!r}") from None
    if cap < 0:
        raise UsageError(f"{CAP_VARIABLE} must not be negative")
    return cap


def cmd_equiv(args):
    p1, p2 = _load_program(args.file1), _load_program(args.file2)
    dom = _domain(p1, args.type, "equiv")
    return compare(p1.comb, p2.comb, dom, _cap())


def cmd_normalize(args):
    ty = parse_type(args.type)
    comb = normalizer(ty)
    u = Unifier()
    cod = u.zonk(infer_term(comb, ty, u).cod)
    assert cod == canonical_type(size(ty))
    return Normalized(ty, comb, cod)


def cmd_prove(args):
    script = parse_proof(_read(args.file))
    return check_proof(script)


def cmd_rules(args):
    return RuleList(tuple(rule_registry()), args.dump)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pi", description="Tools for the Pi reversible language.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("run", parents=[common], help="evaluate a program on a value")
    p.add_argument("file")
    p.add_argument("--in", dest="type", help="input type (overrides the file header)")
    p.add_argument("--value", required=True, help="input value, e.g. \"(inl (), ())\"")
    p.add_argument("--reverse", action="store_true", help="run the program backwards")
    p.add_argument("--trace", action="store_true", help="print each sequential step")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("invert", parents=[common], help="print the inverse program")
    p.add_argument("file")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("perm", parents=[common], help="print a program as a permutation")
    p.add_argument("file")
    p.add_argument("--in", dest="type", help="input type (overrides the file header)")
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("equiv", parents=[common], help="compare two programs on every input")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--in", dest="type", help="common input type")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("normalize", parents=[common], help="isomorphism from a type to its canonical form")
    p.add_argument("--type", required=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("prove", parents=[common], help="check a .piproof script")
    p.add_argument("file")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("rules", parents=[common], help="list the rewrite rules")
    p.add_argument("--dump", action="store_true", help="emit the full registry as JSON")
    p.set_defaults(func=cmd_rules)
    return parser


def _failure(result) -> Optional[PiError]:
    if isinstance(result, EquivReport) and not result.equivalent:
        return NotEquivalent(f"{result.agree}/{result.total} values agree")
    if isinstance(result, ProofReport) and not result.accepted:
        where = f"step {result.failed_step}" if result.failed_step else "claim"
        return ProofRejected(f"{where}: {result.kind}: {result.message}")
    return None


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        result = args.func(args)
    except UsageError as e:
        print(f"pi: error: {e}", file=sys.stderr)
        return 2
    except PiError as e:
        print(f"ERROR {e.kind}: {e.message}", file=sys.stderr)
        return 1
    failure = _failure(result)
    if failure is not None:
        print(f"ERROR {failure.kind}: {failure.message}", file=sys.stderr)
        print(render(result, args.format))
        return 1
    print(render(result, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
