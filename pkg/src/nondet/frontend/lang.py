"""A small guarded-command language over bounded integer variables.

::

    space { x : 0..7; y : 0..7; }
    do
      :: x > y -> x := x - y
      :: y > x -> y := y - x
    od

``if ... fi`` is the alternative construct, ``do ... od`` the loop.  Each
file holds exactly one construct.  ``#`` starts a comment; a single ``=``
is accepted as equality.
"""

from __future__ import annotations

import re
from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal, Optional, Union

from ..gcl import Patch, Quilt
from ..sets import StateSet
from .errors import ParseError, SemanticError, UnknownNameError
from .varspace import VarSpace

# ---------------------------------------------------------------- syntax tree


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class Arith:
    op: Literal["+", "-", "*"]
    left: Expr
    right: Expr


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Not:
    operand: Predicate


@dataclass(frozen=True)
class BoolOp:
    op: Literal["&&", "||"]
    left: Predicate
    right: Predicate


@dataclass(frozen=True)
class Compare:
    op: Literal["==", "!=", "<", "<=", ">", ">="]
    left: Expr
    right: Expr


Expr = Union[IntLit, Var, Neg, Arith]
Predicate = Union[BoolLit, Not, BoolOp, Compare]


@dataclass(frozen=True)
class Command:
    guard: Predicate
    assignments: tuple[tuple[str, Expr], ...]


@dataclass(frozen=True)
class Program:
    space: VarSpace
    construct: Literal["if", "do"]
    commands: tuple[Command, ...]


# ------------------------------------------------------------------ tokenizer

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>::|:=|->|\.\.|==|!=|<=|>=|&&|\|\||[-+*<>=!(){};:,])
    """,
    re.VERBOSE,
)

KEYWORDS = {"space", "if", "fi", "do", "od", "true", "false"}
RELOPS = {"==", "!=", "<", "<=", ">", ">=", "="}


@dataclass(frozen=True)
class Token:
    kind: str  # int | ident | keyword | op | eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            if kind == "ident" and value in KEYWORDS:
                kind = "keyword"
            tokens.append(Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# --------------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str, space: Optional[VarSpace] = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.space = space

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.column)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "keyword")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.error("expected identifier")
        return self.advance()

    def expect_eof(self) -> None:
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")

    def signed_int(self) -> int:
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        if self.tok.kind != "int":
            raise self.error("expected integer")
        return sign * int(self.advance().text)

    # program := space-block (if-block | do-block)
    def program(self) -> Program:
        self.expect("space")
        self.expect("{")
        decls = []
        while not self.at("}"):
            name = self.expect_ident()
            self.expect(":")
            lo = self.signed_int()
            self.expect("..")
            hi = self.signed_int()
            self.expect(";")
            if any(d[0] == name.text for d in decls):
                raise SemanticError(f"variable {name.text!r} declared twice", name.line, name.column)
            if lo > hi:
                raise SemanticError(f"empty range {lo}..{hi} for {name.text!r}", name.line, name.column)
            decls.append((name.text, lo, hi))
        brace = self.expect("}")
        if not decls:
            raise ParseError("space block declares no variables", brace.line, brace.column)
        try:
            self.space = VarSpace(decls)
        except ValueError as exc:
            raise SemanticError(str(exc), brace.line, brace.column) from None

        if self.at("if"):
            construct, closer = "if", "fi"
        elif self.at("do"):
            construct, closer = "do", "od"
        else:
            raise self.error("expected 'if' or 'do'")
        self.advance()
        commands = []
        while self.at("::"):
            commands.append(self.command())
        self.expect(closer)
        self.expect_eof()
        return Program(self.space, construct, tuple(commands))

    def command(self) -> Command:
        self.expect("::")
        guard = self.predicate()
        self.expect("->")
        assignments = [self.assignment()]
        while self.at(","):
            self.advance()
            assignments.append(self.assignment())
        return Command(guard, tuple(assignments))

    def assignment(self) -> tuple[str, Expr]:
        name = self.expect_ident()
        self.check_var(name)
        self.expect(":=")
        return name.text, self.expr()

    def check_var(self, tok: Token) -> None:
        if self.space is not None and tok.text not in self.space:
            raise UnknownNameError(f"unknown variable {tok.text!r}", tok.line, tok.column)

    # predicate := conj ('||' conj)*
    def predicate(self) -> Predicate:
        left = self.conjunction()
        while self.at("||"):
            self.advance()
            left = BoolOp("||", left, self.conjunction())
        return left

    def conjunction(self) -> Predicate:
        left = self.negation()
        while self.at("&&"):
            self.advance()
            left = BoolOp("&&", left, self.negation())
        return left

    def negation(self) -> Predicate:
        if self.at("!"):
            self.advance()
            return Not(self.negation())
        return self.atom_predicate()

    def atom_predicate(self) -> Predicate:
        if self.at("true") or self.at("false"):
            return BoolLit(self.advance().text == "true")
        if self.at("("):
            # either a parenthesised predicate or a comparison whose left
            # operand starts with a parenthesis
            mark = self.pos
            try:
                left = self.expr()
                if self.tok.text in RELOPS:
                    return self.comparison_rest(left)
            except ParseError:
                pass
            self.pos = mark
            self.expect("(")
            inner = self.predicate()
            self.expect(")")
            return inner
        left = self.expr()
        return self.comparison_rest(left)

    def comparison_rest(self, left: Expr) -> Predicate:
        if self.tok.text not in RELOPS or self.tok.kind != "op":
            raise self.error("expected comparison operator")
        op = self.advance().text
        if op == "=":
            op = "=="
        return Compare(op, left, self.expr())

    # expr := term (('+'|'-') term)*
    def expr(self) -> Expr:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            left = Arith(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("*"):
            self.advance()
            left = Arith("*", left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.at("-"):
            self.advance()
            if self.tok.kind == "int":
                return IntLit(-int(self.advance().text))
            return Neg(self.unary())
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.text))
        if tok.kind == "ident":
            self.advance()
            self.check_var(tok)
            return Var(tok.text)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.error("expected expression")


def _text(source: Union[str, bytes]) -> str:
    if isinstance(source, bytes):
        try:
            return source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    return source


def parse_program(source: Union[str, bytes]) -> Program:
    parser = _Parser(_text(source))
    program = parser.program()
    for cmd, start in zip(program.commands, _command_tokens(parser)):
        names = [name for name, _ in cmd.assignments]
        for name in names:
            if names.count(name) > 1:
                raise SemanticError(f"variable {name!r} assigned twice in one command", start.line, start.column)
    return program


def _command_tokens(parser: _Parser) -> list[Token]:
    return [t for t in parser.tokens if t.text == "::" and t.kind == "op"]


def parse_predicate(source: Union[str, bytes], space: Optional[VarSpace] = None) -> Predicate:
    parser = _Parser(_text(source), space)
    pred = parser.predicate()
    parser.expect_eof()
    return pred


def parse_expr(source: Union[str, bytes], space: Optional[VarSpace] = None) -> Expr:
    parser = _Parser(_text(source), space)
    e = parser.expr()
    parser.expect_eof()
    return e


# -------------------------------------------------------------------- printer

_PRED_LEVEL = {"||": 1, "&&": 2}
_EXPR_LEVEL = {"+": 1, "-": 1, "*": 2}


def _pred_level(p: Predicate) -> int:
    if isinstance(p, BoolOp):
        return _PRED_LEVEL[p.op]
    if isinstance(p, Not):
        return 3
    return 4


def _expr_level(e: Expr) -> int:
    if isinstance(e, Arith):
        return _EXPR_LEVEL[e.op]
    if isinstance(e, Neg):
        return 3
    return 4


def format_expr(e: Expr) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = format_expr(e.operand)
        # parenthesise literals: "-3" would read back as a negative literal
        if isinstance(e.operand, IntLit) or _expr_level(e.operand) < 3:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(e, Arith):
        level = _EXPR_LEVEL[e.op]
        left = format_expr(e.left)
        right = format_expr(e.right)
        if _expr_level(e.left) < level:
            left = f"({left})"
        if _expr_level(e.right) <= level:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression: {e!r}")


def format_predicate(p: Predicate) -> str:
    if isinstance(p, BoolLit):
        return "true" if p.value else "false"
    if isinstance(p, Compare):
        return f"{format_expr(p.left)} {p.op} {format_expr(p.right)}"
    if isinstance(p, Not):
        inner = format_predicate(p.operand)
        if not isinstance(p.operand, (BoolLit, Not)):
            inner = f"({inner})"
        return "!" + inner
    if isinstance(p, BoolOp):
        level = _PRED_LEVEL[p.op]
        left = format_predicate(p.left)
        right = format_predicate(p.right)
        if _pred_level(p.left) < level:
            left = f"({left})"
        if _pred_level(p.right) <= level:
            right = f"({right})"
        return f"{left} {p.op} {right}"
    raise TypeError(f"not a predicate: {p!r}")


def format_program(p: Program) -> str:
    lines = ["space {"]
    for name, lo, hi in p.space.variables:
        lines.append(f"  {name} : {lo}..{hi};")
    lines.append("}")
    lines.append(p.construct)
    for cmd in p.commands:
        assigns = ", ".join(f"{name} := {format_expr(e)}" for name, e in cmd.assignments)
        lines.append(f"  :: {format_predicate(cmd.guard)} -> {assigns}")
    lines.append("fi" if p.construct == "if" else "od")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- evaluation

Env = dict


def compile_expr(e: Expr, space: Optional[VarSpace] = None) -> Callable[[Env], int]:
    """Turn an expression into ``fn(env) -> int``."""
    if isinstance(e, IntLit):
        value = e.value
        return lambda env: value
    if isinstance(e, Var):
        name = e.name
        if space is not None and name not in space:
            raise UnknownNameError(f"unknown variable {name!r}")
        return lambda env: env[name]
    if isinstance(e, Neg):
        f = compile_expr(e.operand, space)
        return lambda env: -f(env)
    if isinstance(e, Arith):
        f = compile_expr(e.left, space)
        g = compile_expr(e.right, space)
        if e.op == "+":
            return lambda env: f(env) + g(env)
        if e.op == "-":
            return lambda env: f(env) - g(env)
        return lambda env: f(env) * g(env)
    raise TypeError(f"not an expression: {e!r}")


_COMPARE = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def compile_predicate(p: Predicate, space: Optional[VarSpace] = None) -> Callable[[Env], bool]:
    """Turn a predicate into ``fn(env) -> bool``."""
    if isinstance(p, BoolLit):
        value = p.value
        return lambda env: value
    if isinstance(p, Compare):
        f = compile_expr(p.left, space)
        g = compile_expr(p.right, space)
        cmp = _COMPARE[p.op]
        return lambda env: cmp(f(env), g(env))
    if isinstance(p, Not):
        f = compile_predicate(p.operand, space)
        return lambda env: not f(env)
    if isinstance(p, BoolOp):
        f = compile_predicate(p.left, space)
        g = compile_predicate(p.right, space)
        if p.op == "&&":
            return lambda env: f(env) and g(env)
        return lambda env: f(env) or g(env)
    raise TypeError(f"not a predicate: {p!r}")


def predicate_set(space: VarSpace, pred: Union[Predicate, str]) -> StateSet:
    """All states of ``space`` satisfying ``pred``."""
    if isinstance(pred, str):
        pred = parse_predicate(pred, space)
    test = compile_predicate(pred, space)
    mask = 0
    for i, env in enumerate(space.environments()):
        if test(env):
            mask |= 1 << i
    return StateSet(space.states, mask)


@dataclass(frozen=True)
class CompiledProgram:
    quilt: Quilt
    #: per command, guarded states dropped because an assignment left its range
    excluded: tuple[StateSet, ...]


def compile_program(p: Program) -> CompiledProgram:
    """Build the quilt of a program.

    Each command becomes a patch whose domain is the set of states satisfying
    the guard and whose simultaneous assignment stays inside every range.
    """
    space = p.space
    envs = list(space.environments())
    patches = []
    excluded = []
    for cmd in p.commands:
        guard = compile_predicate(cmd.guard, space)
        assigns = [(name, compile_expr(e, space)) for name, e in cmd.assignments]
        for name, _ in cmd.assignments:
            if name not in space:
                raise UnknownNameError(f"unknown variable {name!r}")
        transition = {}
        dropped = 0
        for i, env in enumerate(envs):
            if not guard(env):
                continue
            updated = dict(env)
            for name, fn in assigns:
                updated[name] = fn(env)
            if all(space.in_range(name, updated[name]) for name, _ in assigns):
                transition[i] = space.encode(updated)
            else:
                dropped |= 1 << i
        domain = StateSet(space.states, sum(1 << i for i in transition))
        patches.append(Patch(domain, transition))
        excluded.append(StateSet(space.states, dropped))
    return CompiledProgram(Quilt(space.states, patches), tuple(excluded))


def program_to_quilt(p: Program) -> Quilt:
    return compile_program(p).quilt


def program_warnings(p: Program) -> list[str]:
    """Literals that can never match a variable's declared range."""
    warnings = []

    def visit(pred: Predicate) -> None:
        if isinstance(pred, Compare):
            for var, lit in ((pred.left, pred.right), (pred.right, pred.left)):
                if isinstance(var, Var) and isinstance(lit, IntLit) and var.name in p.space:
                    if not p.space.in_range(var.name, lit.value):
                        lo, hi = p.space.bounds(var.name)
                        warnings.append(f"literal {lit.value} compared with {var.name} outside {lo}..{hi}")
        elif isinstance(pred, Not):
            visit(pred.operand)
        elif isinstance(pred, BoolOp):
            visit(pred.left)
            visit(pred.right)

    for cmd in p.commands:
        visit(cmd.guard)
        for name, e in cmd.assignments:
            if isinstance(e, IntLit) and name in p.space and not p.space.in_range(name, e.value):
                lo, hi = p.space.bounds(name)
                warnings.append(f"literal {e.value} assigned to {name} outside {lo}..{hi}")
    return warnings
