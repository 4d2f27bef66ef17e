"""The ``.llp`` language: parsing, validation and rendering.

A program is a list of declarations, each terminated by ``.``::

    fact(0,1).
    ! fact(X,Y) -o fact(X+1, X*Y+Y).

``-o`` is linear implication, ``*`` joins resources (and multiplies inside
terms), ``!`` marks a law or resource as reusable. Guards follow the consumed
atoms after a comma: ``! p(X), X >= 3 -o p(h) * p(X-3).``
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .terms import (
    ARITH_FUNCTORS,
    GUARD_FUNCTORS,
    Compound,
    Seq,
    Term,
    Var,
    contains_functor,
    is_ground,
    ordered_variables,
    variables,
)


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Fact:
    term: Term
    persistent: bool = False
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Rule:
    id: int
    consumed: tuple
    guards: tuple = ()
    # (pattern, persistent) pairs
    produced: tuple = ()
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Program:
    initial: tuple = ()
    rules: tuple = ()


@dataclass(frozen=True)
class Query:
    goals: tuple
    mode: str = "partial"

    def __post_init__(self):
        if not self.goals:
            raise ValueError("a query needs at least one goal")
        if self.mode not in ("partial", "exhaustive"):
            raise ValueError(f"unknown match mode {self.mode!r}")

    @property
    def variables(self) -> list[str]:
        seen: list[str] = []
        for g in self.goals:
            for v in ordered_variables(g):
                if v not in seen:
                    seen.append(v)
        return seen


class ParseError(Exception):
    def __init__(self, pos: Pos, expected: list[str], found: str):
        self.pos = pos
        self.expected = sorted(set(expected))
        self.found = found
        super().__init__(f"{pos}: expected {' or '.join(self.expected)}, found {found}")


@dataclass(frozen=True)
class Diagnostic:
    pos: Pos
    message: str

    def format(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.pos}: {self.message}"


# -- tokens -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<impl>-o(?![A-Za-z0-9_]))
  | (?P<op>>=|<=|[<>])
  | (?P<int>[0-9]+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<punct>[()\[\],.*+\-!])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: Pos

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        pos = Pos(line, i - line_start + 1)
        if m is None:
            raise ParseError(pos, ["a token"], repr(text[i]))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind if kind != "punct" and kind != "op" else m.group(), m.group(), pos))
        for k, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = i + k + 1
        i = m.end()
    tokens.append(Token("eof", "", Pos(line, i - line_start + 1)))
    return tokens


# -- parser -------------------------------------------------------------------

_GUARD_OPS = {"<": ("lt", False), ">=": ("geq", False), ">": ("lt", True), "<=": ("geq", True)}
_ARITH_OPS = {"+": "add", "-": "sub", "*": "mul"}
_KIND_NAMES = {"impl": "'-o'", "ident": "identifier", "var": "variable", "int": "integer",
               "string": "string", "eof": "end of input"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, *kinds: str) -> Token:
        if not self.at(*kinds):
            self.fail(list(kinds))
        return self.advance()

    def fail(self, expected):
        names = [_KIND_NAMES.get(k, repr(k)) for k in expected]
        raise ParseError(self.tok.pos, names, self.tok.describe())

    # program := (decl ".")*
    def program(self) -> Program:
        initial: list[Fact] = []
        rules: list[Rule] = []
        while not self.at("eof"):
            self.decl(initial, rules)
        return Program(tuple(initial), tuple(rules))

    def decl(self, initial, rules):
        start = self.tok.pos
        if self.at("!"):
            self.advance()
            atoms = [self.atom()]
            while self.at("*"):
                self.advance()
                atoms.append(self.atom())
            if self.at("."):
                self.advance()
                initial.extend(Fact(a, True, start) for a in atoms)
                return
            guards = []
            while self.at(","):
                self.advance()
                guards.append(self.guard())
            self.expect("impl", ",", "*", ".")
            produced = [self.rhs_atom()]
            while self.at("*"):
                self.advance()
                produced.append(self.rhs_atom())
            self.expect(".", "*")
            rules.append(Rule(len(rules) + 1, tuple(atoms), tuple(guards), tuple(produced), start))
            return
        facts = [self.rhs_atom()]
        while self.at("*"):
            self.advance()
            facts.append(self.rhs_atom())
        if self.at("impl", ","):
            raise ParseError(self.tok.pos, ["'.'"],
                             f"{self.tok.describe()} (a transition law must start with '!')")
        self.expect(".", "*")
        initial.extend(Fact(t, p, start) for t, p in facts)

    def rhs_atom(self) -> tuple:
        if self.at("!"):
            self.advance()
            return self.atom(), True
        return self.atom(), False

    # atom := ident "(" term ("," term)* ")" | ident
    def atom(self) -> Term:
        name = self.expect("ident").text
        if not self.at("("):
            return name
        self.advance()
        args = [self.term()]
        while self.at(","):
            self.advance()
            args.append(self.term())
        self.expect(")", ",")
        return Compound(name, tuple(args))

    def guard(self) -> Compound:
        left = self.term()
        op = self.expect(*_GUARD_OPS).text
        right = self.term()
        functor, swap = _GUARD_OPS[op]
        return Compound(functor, (right, left) if swap else (left, right))

    # term := mul (("+"|"-") mul)* ; mul := unary ("*" unary)*
    def term(self) -> Term:
        left = self.product()
        while self.at("+", "-"):
            op = self.advance().text
            left = Compound(_ARITH_OPS[op], (left, self.product()))
        return left

    def product(self) -> Term:
        left = self.unary()
        while self.at("*"):
            self.advance()
            left = Compound("mul", (left, self.unary()))
        return left

    def unary(self) -> Term:
        if self.at("-"):
            self.advance()
            return -int(self.expect("int").text)
        return self.primary()

    def primary(self) -> Term:
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return int(tok.text)
        if tok.kind == "var":
            self.advance()
            return Var(tok.text)
        if tok.kind == "ident":
            return self.atom()
        if tok.kind == "string":
            self.advance()
            return Seq(tuple(tok.text[1:-1]))
        if tok.kind == "[":
            self.advance()
            items: list = []
            if not self.at("]"):
                items.extend(self.seq_item())
                while self.at(","):
                    self.advance()
                    items.extend(self.seq_item())
            self.expect("]", ",")
            return Seq(tuple(items))
        if tok.kind == "(":
            self.advance()
            inner = self.term()
            self.expect(")")
            return inner
        self.fail(["int", "var", "ident", "string", "[", "(", "-"])

    def seq_item(self) -> tuple:
        tok = self.expect("var", "ident", "string")
        if tok.kind == "var":
            return (Var(tok.text),)
        if tok.kind == "ident":
            return (tok.text,)
        return tuple(tok.text[1:-1])

    def query(self) -> tuple:
        goals = [self.atom()]
        while self.at("*"):
            self.advance()
            goals.append(self.atom())
        if self.at("."):
            self.advance()
        self.expect("eof", "*")
        return tuple(goals)


def parse_program(text: str) -> Program:
    return _Parser(text).program()


def parse_query(text: str, mode: str = "partial") -> Query:
    return Query(_Parser(text).query(), mode)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.expect("eof")
    return t


# -- validation ---------------------------------------------------------------

def _guard_arg_ok(t: Term) -> bool:
    if type(t) is int or isinstance(t, Var):
        return True
    if isinstance(t, Compound) and t.functor in ARITH_FUNCTORS and len(t.args) == 2:
        return all(_guard_arg_ok(a) for a in t.args)
    return False


def _term_problems(t: Term, where: str) -> list[str]:
    if contains_functor(t, GUARD_FUNCTORS):
        return [f"comparison used as a term in {where}"]
    return []


def validate(program: Program) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def report(pos, message):
        diags.append(Diagnostic(pos or Pos(1, 1), message))

    for fact in program.initial:
        for msg in _term_problems(fact.term, "initial fact"):
            report(fact.pos, msg)
        if not is_ground(fact.term):
            names = ", ".join(sorted(variables(fact.term)))
            report(fact.pos, f"initial fact is not ground (variables {names})")
        elif contains_functor(fact.term, ARITH_FUNCTORS):
            report(fact.pos, "arithmetic in initial fact")

    for rule in program.rules:
        bound: set[str] = set()
        for pat in rule.consumed:
            bound |= variables(pat)
            if contains_functor(pat, ARITH_FUNCTORS):
                report(rule.pos, f"rule#{rule.id}: arithmetic in consumed pattern")
            for msg in _term_problems(pat, "consumed pattern"):
                report(rule.pos, f"rule#{rule.id}: {msg}")
        for g in rule.guards:
            if not all(_guard_arg_ok(a) for a in g.args):
                report(rule.pos, f"rule#{rule.id}: guard arguments must be arithmetic")
            for v in sorted(variables(g) - bound):
                report(rule.pos, f"rule#{rule.id}: variable {v} in guard is not bound by a consumed pattern")
        for pat, _ in rule.produced:
            for msg in _term_problems(pat, "produced pattern"):
                report(rule.pos, f"rule#{rule.id}: {msg}")
            for v in sorted(variables(pat) - bound):
                report(rule.pos, f"rule#{rule.id}: variable {v} in produced pattern is not bound by a consumed pattern")
    diags.sort(key=lambda d: (d.pos.line, d.pos.col))
    return diags


def validate_query(query: Query) -> list[str]:
    problems = []
    for g in query.goals:
        if contains_functor(g, ARITH_FUNCTORS):
            problems.append("arithmetic is not allowed in query goals")
        problems.extend(_term_problems(g, "query"))
    return problems


class ValidationError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(f"{d.pos}: {d.message}" for d in diagnostics))


def load_program(text: str) -> Program:
    """Parse and validate; raises ParseError or ValidationError."""
    program = parse_program(text)
    diags = validate(program)
    if diags:
        raise ValidationError(diags)
    return program


# -- rendering ----------------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2}
_SYMBOL = {"add": "+", "sub": "-", "mul": "*"}


def _is_arith(t) -> bool:
    return isinstance(t, Compound) and t.functor in ARITH_FUNCTORS and len(t.args) == 2


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if type(t) is int:
        return str(t)
    if isinstance(t, str):
        return t
    if isinstance(t, Seq):
        return _render_seq(t)
    if _is_arith(t):
        prec = _PREC[t.functor]
        left, right = t.args
        ls, rs = render_term(left), render_term(right)
        if _is_arith(left) and _PREC[left.functor] < prec:
            ls = f"({ls})"
        if _is_arith(right) and _PREC[right.functor] <= prec:
            rs = f"({rs})"
        return f"{ls} {_SYMBOL[t.functor]} {rs}"
    return f"{t.functor}({', '.join(render_term(a) for a in t.args)})"


def _plain_char(item) -> bool:
    return isinstance(item, str) and len(item) == 1 and item != '"'


def _render_seq(t: Seq) -> str:
    if all(_plain_char(i) for i in t.items):
        return '"' + "".join(t.items) + '"'
    parts: list[str] = []
    run: list[str] = []
    for item in t.items:
        if _plain_char(item):
            run.append(item)
            continue
        if run:
            parts.append('"' + "".join(run) + '"')
            run = []
        parts.append(item.name if isinstance(item, Var) else item)
    if run:
        parts.append('"' + "".join(run) + '"')
    return "[" + ", ".join(parts) + "]"


def render_guard(g: Compound) -> str:
    op = "<" if g.functor == "lt" else ">="
    return f"{render_term(g.args[0])} {op} {render_term(g.args[1])}"


def _bang(term, persistent: bool) -> str:
    return ("!" if persistent else "") + render_term(term)


def render_rule(rule: Rule) -> str:
    lhs = " * ".join(render_term(p) for p in rule.consumed)
    if rule.guards:
        lhs += ", " + ", ".join(render_guard(g) for g in rule.guards)
    rhs = " * ".join(_bang(t, p) for t, p in rule.produced)
    return f"! {lhs} -o {rhs}."


def render(program: Program) -> str:
    lines = []
    for fact in program.initial:
        lines.append(("! " if fact.persistent else "") + render_term(fact.term) + ".")
    lines.extend(render_rule(r) for r in program.rules)
    return "".join(line + "\n" for line in lines)
