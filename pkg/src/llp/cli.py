"""Command-line front end: ``llp run``, ``llp check``, ``llp reach``.

Exit codes: 0 solved / clean, 1 no solution, 2 parse, validation or runtime error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .engine import (
    GuardNotGround,
    SearchConfig,
    State,
    Status,
    reachable_levels,
    solve,
)
from .program import (
    ParseError,
    Program,
    parse_program,
    parse_query,
    render_term,
    validate,
    validate_query,
)
from .terms import EvalError

EXAMPLES = ("factorial", "max", "miu", "menu")


class CliError(Exception):
    """Reported on stderr, one message per line; exit code 2."""

    def __init__(self, messages: list[str]):
        self.messages = messages
        super().__init__("\n".join(messages))


@dataclass
class RunReport:
    status: str
    solutions: list = field(default_factory=list)
    elapsed: float = 0.0
    states_expanded: int = 0
    transitions_fired: int = 0
    errors: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "solutions": self.solutions,
            "stats": {
                "states_expanded": self.states_expanded,
                "transitions_fired": self.transitions_fired,
            },
            "elapsed_seconds": round(self.elapsed, 6),
            "errors": self.errors,
        }


def example_path(name: str) -> Path:
    return Path(str(resources.files("llp") / "examples" / f"{name}.llp"))


def read_source(path: str) -> tuple[str, str]:
    """Text of a program file; bundled examples resolve by name if no such file exists."""
    p = Path(path)
    if not p.exists():
        stem = p.name[:-4] if p.name.endswith(".llp") else p.name
        if stem in EXAMPLES:
            p = example_path(stem)
        else:
            raise CliError([f"{path}: no such file"])
    try:
        return str(path), p.read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError([f"{path}: {exc.strerror}"]) from exc


def load(path: str) -> tuple[str, Program]:
    name, text = read_source(path)
    try:
        program = parse_program(text)
    except ParseError as exc:
        raise CliError([f"{name}:{exc.pos}: expected {' or '.join(exc.expected)}, found {exc.found}"]) from exc
    diags = validate(program)
    if diags:
        raise CliError([d.format(name) for d in diags])
    return name, program


# -- rendering ----------------------------------------------------------------

def render_state(st: State) -> str:
    out = "{" + ", ".join(render_term(t) for t in st.linear) + "}"
    if st.persistent:
        out += " !{" + ", ".join(render_term(t) for t in st.persistent) + "}"
    return out


def _resources(terms) -> str:
    return " * ".join(terms) if terms else "1"


def render_transition(k: int, tr) -> str:
    consumed = _resources([render_term(t) for t in tr.consumed])
    produced = _resources([("!" if p else "") + render_term(t) for t, p in tr.produced])
    return f"[{k}] rule#{tr.rule_id}: {consumed} ⇒ {produced}"


def _transition_json(k: int, tr) -> dict:
    return {
        "step": k,
        "rule": tr.rule_id,
        "bindings": {n: render_term(t) for n, t in tr.substitution},
        "consumed": [render_term(t) for t in tr.consumed],
        "produced": [{"resource": render_term(t), "persistent": p} for t, p in tr.produced],
    }


# -- commands -----------------------------------------------------------------

def _max_solutions(text: str) -> int | None:
    if text == "all":
        return None
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer or 'all'")
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer or 'all'")
    return n


def _nonnegative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    if n < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return n


def run_query(args) -> tuple[RunReport, list]:
    _, program = load(args.file)
    try:
        query = parse_query(args.query, args.match)
    except ParseError as exc:
        raise CliError([f"query:{exc.pos}: expected {' or '.join(exc.expected)}, found {exc.found}"]) from exc
    problems = validate_query(query)
    if problems:
        raise CliError([f"query: {p}" for p in problems])
    cfg = SearchConfig(strategy=args.strategy, max_depth=args.max_depth,
                       max_solutions=args.max_solutions, mode=args.match)
    start = time.perf_counter()
    try:
        result = solve(program, query, cfg)
    except (EvalError, GuardNotGround, TypeError) as exc:
        raise CliError([f"runtime error: {exc}"]) from exc
    report = RunReport(result.status.value, elapsed=time.perf_counter() - start,
                       states_expanded=result.states_expanded,
                       transitions_fired=result.transitions_fired)
    for sol in result.solutions:
        entry = {"bindings": {n: render_term(t) for n, t in sol.answer}, "depth": sol.depth}
        if args.trace:
            entry["trace"] = [_transition_json(k, tr) for k, tr in enumerate(sol.trace, 1)]
        report.solutions.append(entry)
    return report, result.solutions


def cmd_run(args, out, err) -> int:
    try:
        report, solutions = run_query(args)
    except CliError as exc:
        if args.json:
            out.write(json.dumps(RunReport("error", errors=exc.messages).to_json(), indent=2) + "\n")
        for msg in exc.messages:
            err.write(msg + "\n")
        return 2
    if args.json:
        out.write(json.dumps(report.to_json(), indent=2) + "\n")
    elif solutions:
        for sol in solutions:
            answer = ", ".join(f"{n} = {render_term(t)}" for n, t in sol.answer) or "yes"
            out.write(f"{answer}  (depth {sol.depth})\n")
            if args.trace:
                for k, tr in enumerate(sol.trace, 1):
                    out.write("  " + render_transition(k, tr) + "\n")
    elif report.status == Status.DEPTH_EXHAUSTED.value:
        out.write(f"no solution within depth {args.max_depth}\n")
    else:
        out.write("no solution (search space exhausted)\n")
    return 0 if report.status == Status.SOLVED.value else 1


def cmd_check(args, out, err) -> int:
    try:
        name, text = read_source(args.file)
    except CliError as exc:
        err.write("\n".join(exc.messages) + "\n")
        return 2
    try:
        program = parse_program(text)
    except ParseError as exc:
        err.write(f"{name}:{exc.pos}: expected {' or '.join(exc.expected)}, found {exc.found}\n")
        return 2
    diags = validate(program)
    for d in diags:
        err.write(d.format(name) + "\n")
    if diags:
        return 2
    if not program.initial and not program.rules:
        err.write(f"{name}: warning: empty program\n")
        return 0
    out.write(f"{name}: ok ({len(program.initial)} facts, {len(program.rules)} rules)\n")
    return 0


def cmd_reach(args, out, err) -> int:
    try:
        _, program = load(args.file)
        levels = reachable_levels(program, args.depth)
    except CliError as exc:
        err.write("\n".join(exc.messages) + "\n")
        return 2
    except (EvalError, GuardNotGround, TypeError) as exc:
        err.write(f"runtime error: {exc}\n")
        return 2
    if args.json:
        doc = {
            "depth": args.depth,
            "count": sum(len(level) for level in levels),
            "levels": [
                {"depth": d, "states": [
                    {"linear": [render_term(t) for t in st.linear],
                     "persistent": [render_term(t) for t in st.persistent]}
                    for st in level]}
                for d, level in enumerate(levels)
            ],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return 0
    for d, level in enumerate(levels):
        out.write(f"depth {d}:\n")
        for st in level:
            out.write(f"  {render_state(st)}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="llp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve a query against a program")
    run.add_argument("file")
    run.add_argument("--query", required=True)
    run.add_argument("--strategy", choices=("bfs", "dfs", "iddfs"), default="bfs")
    run.add_argument("--max-depth", type=_nonnegative, default=64)
    run.add_argument("--max-solutions", type=_max_solutions, default=1)
    run.add_argument("--match", choices=("partial", "exhaustive"), default="partial")
    run.add_argument("--trace", action="store_true")
    run.add_argument("--json", action="store_true")
    run.set_defaults(func=cmd_run)

    check = sub.add_parser("check", help="parse and validate a program")
    check.add_argument("file")
    check.set_defaults(func=cmd_check)

    reach = sub.add_parser("reach", help="list states reachable within a depth")
    reach.add_argument("file")
    reach.add_argument("--depth", type=_nonnegative, default=3)
    reach.add_argument("--json", action="store_true")
    reach.set_defaults(func=cmd_reach)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    return args.func(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
