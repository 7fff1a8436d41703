"""Command line interface.

Exit codes: 0 success, 1 usage or parse error, 2 semantic error (unknown
name, space mismatch), 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .. import dynamics, gcl, transformers
from ..sets import ChoiceMap, SpaceMismatchError, StateSet, StateSpace, inverse
from .errors import FrontendError, ParseError, SemanticError, UnknownNameError
from .lang import (
    Program,
    compile_program,
    parse_predicate,
    parse_program,
    predicate_set,
    program_warnings,
)
from .structure import parse_structure

EXIT_OK, EXIT_USAGE, EXIT_SEMANTIC, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    def __init__(self, report):
        super().__init__("internal invariant violated")
        self.report = report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled law checks")
    common.add_argument("--verbose", action="store_true")

    parser = _Parser(prog="nondet", description="Analyse choice structures and guarded-command programs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="dyn, fix, stab, con and con_w")
    p.add_argument("file")

    p = sub.add_parser("wp", parents=[common], help="weakest precondition of the construct")
    p.add_argument("file")
    p.add_argument("--post", required=True, help="predicate, or a JSON array of state names for structure files")

    p = sub.add_parser("basin", parents=[common], help="basin of a target set")
    p.add_argument("file")
    p.add_argument("--target", required=True)

    p = sub.add_parser("runs", parents=[common], help="enumerate runs from a state")
    p.add_argument("file")
    p.add_argument("--from", dest="start", required=True)
    p.add_argument("--max-len", type=int, required=True)

    p = sub.add_parser("check", parents=[common], help="theorem and law checks")
    p.add_argument("file")
    p.add_argument("--invariant", help="loop invariant candidate (programs)")
    p.add_argument("--pre", help="precondition A for the alternative-construct check")
    p.add_argument("--post", help="postcondition B for the alternative-construct check")
    return parser


class Loaded:
    """A structure file or a compiled program."""

    def __init__(self, text: str):
        self.program: Optional[Program] = None
        if text.lstrip().startswith("{"):
            self.space, self.delta = parse_structure(text)
            self.quilt = None
            self.excluded = ()
        else:
            self.program = parse_program(text)
            compiled = compile_program(self.program)
            self.quilt = compiled.quilt
            self.excluded = compiled.excluded
            self.space = self.quilt.space
            self.delta = gcl.quilt_delta(self.quilt)

    def subset(self, source: str) -> StateSet:
        if self.program is not None:
            return _predicate(self.program, source)
        try:
            names = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"expected a JSON array of state names: {exc.msg}") from None
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise ParseError("expected a JSON array of state names")
        return _names_to_set(self.space, names)


def _predicate(program: Program, source: str) -> StateSet:
    return predicate_set(program.space, parse_predicate(source, program.space))


def _names_to_set(space: StateSpace, names) -> StateSet:
    try:
        return space.set(names)
    except KeyError as exc:
        raise UnknownNameError(str(exc.args[0])) from None


def _state_index(space: StateSpace, name: str) -> int:
    try:
        return space.index(name)
    except KeyError as exc:
        raise UnknownNameError(str(exc.args[0])) from None


def _emit(result, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(result, ensure_ascii=False) + "\n")
        return
    if isinstance(result, list):
        for item in result:
            out.write(_text_item(item) + "\n")
    elif isinstance(result, dict):
        for key, value in result.items():
            out.write(f"{key}: {_text_item(value)}\n")
    else:
        out.write(f"{result}\n")


def _text_item(value) -> str:
    if isinstance(value, dict) and "states" in value:
        return f"{value['classification']}: " + " -> ".join(value["states"])
    if isinstance(value, list):
        return "{" + ", ".join(str(v) for v in value) + "}"
    return "null" if value is None else str(value)


def _names(s: StateSet) -> list[str]:
    return s.names()


def cmd_analyze(loaded: Loaded, args) -> dict:
    sets = dynamics.analyze(loaded.delta)
    result = {key: _names(value) for key, value in sets.as_dict().items()}
    if loaded.quilt is not None:
        result["guard"] = _names(loaded.quilt.guard)
        result["hang"] = _names(loaded.quilt.hang)
    return result


def cmd_wp(loaded: Loaded, args) -> list:
    post = loaded.subset(args.post)
    if loaded.program is None:
        return _names(inverse(loaded.delta, post))
    if loaded.program.construct == "if":
        return _names(gcl.wp_if(loaded.quilt, post))
    return _names(gcl.wp_do(loaded.quilt, post))


def cmd_basin(loaded: Loaded, args) -> list:
    return _names(dynamics.basin(loaded.delta, loaded.subset(args.target)))


def cmd_runs(loaded: Loaded, args) -> list:
    if args.max_len < 1:
        raise UsageError("--max-len must be at least 1")
    start = _state_index(loaded.space, args.start)
    delta = loaded.delta
    if loaded.program is not None and loaded.program.construct == "if":
        delta = gcl.if_delta(loaded.quilt)
    runs = dynamics.enumerate_runs(delta, start, args.max_len)
    return [{"states": run.names(loaded.space), "classification": run.classification} for run in runs]


def _verdict(name: str, verdict: gcl.Verdict, space: StateSpace) -> dict:
    return {
        "theorem": name,
        "verdict": verdict.status,
        "witness": None if verdict.witness is None else space.names[verdict.witness],
        "detail": verdict.detail,
    }


def cmd_check(loaded: Loaded, args):
    if loaded.program is not None:
        results = []
        if args.invariant is not None:
            v = loaded.subset(args.invariant)
            results.append(_verdict("invariance", gcl.check_invariance(loaded.quilt, v), loaded.space))
        if args.pre is not None or args.post is not None:
            if args.pre is None or args.post is None:
                raise UsageError("--pre and --post must be given together")
            a, b = loaded.subset(args.pre), loaded.subset(args.post)
            results.append(_verdict("alternative", gcl.check_alternative(loaded.quilt, a, b), loaded.space))
        if not results:
            raise UsageError("check on a program needs --invariant or --pre/--post")
        if any(r["verdict"] == "violation" for r in results):
            raise InvariantViolation(results)
        return results[0] if len(results) == 1 else results
    return _check_structure(loaded.delta, args.seed)


def _check_structure(delta: ChoiceMap, seed: int) -> dict:
    n = len(delta.space)
    samples = None if n <= 10 else 2000
    mu = transformers.verify_axioms(transformers.from_inverse(delta), "multiplicative", samples=samples, seed=seed)
    alpha = transformers.verify_axioms(transformers.from_weak_inverse(delta), "additive", samples=samples, seed=seed)
    sets = dynamics.analyze(delta)
    chain = sets.fix <= sets.con <= (sets.con_w & sets.stab) and sets.stab <= sets.dyn
    limit = dynamics.limit_map(delta)
    limit_ok = dynamics.fixed_points(limit) == sets.fix and dynamics.analyze(limit).dyn == sets.con_w
    basin_ok = dynamics.basin(delta, sets.fix) == dynamics.basin_by_iterated_inverse(delta, sets.fix)
    report = {
        "multiplicative": "pass" if mu.passed else "fail",
        "additive": "pass" if alpha.passed else "fail",
        "coverage": mu.coverage,
        "point_set_chain": "pass" if chain else "fail",
        "limit_map": "pass" if limit_ok else "fail",
        "basin": "pass" if basin_ok else "fail",
    }
    if "fail" in report.values():
        raise InvariantViolation(report)
    return report


def _where(path: str, exc: Exception) -> str:
    if isinstance(exc, FrontendError) and exc.line:
        return f"{path}:{exc}"
    return f"{path}: {exc}"


COMMANDS = {
    "analyze": cmd_analyze,
    "wp": cmd_wp,
    "basin": cmd_basin,
    "runs": cmd_runs,
    "check": cmd_check,
}


def main(argv: Optional[list[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    try:
        with open(args.file, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        stderr.write(f"error: cannot read {args.file}: {exc.strerror}\n")
        return EXIT_USAGE

    try:
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ParseError("input is not UTF-8") from None
        loaded = Loaded(text)
        if args.verbose and loaded.program is not None:
            for warning in program_warnings(loaded.program):
                stderr.write(f"warning: {warning}\n")
            for i, dropped in enumerate(loaded.excluded, 1):
                if dropped:
                    stderr.write(f"note: command {i} guard strengthened by range check, dropping {len(dropped)} states\n")
        result = COMMANDS[args.command](loaded, args)
    except ParseError as exc:
        stderr.write(f"error: {_where(args.file, exc)}\n")
        return EXIT_USAGE
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (SemanticError, SpaceMismatchError) as exc:
        stderr.write(f"error: {_where(args.file, exc)}\n")
        return EXIT_SEMANTIC
    except InvariantViolation as exc:
        _emit(exc.report, args.format, stdout)
        stderr.write("error: internal invariant violated\n")
        return EXIT_INTERNAL
    except FrontendError as exc:  # pragma: no cover - all subclasses handled above
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    _emit(result, args.format, stdout)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
