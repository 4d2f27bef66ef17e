"""Linear-logic dynamic systems: laws as rules, execution as forward search."""
from .engine import SearchConfig, SearchResult, Solution, State, Status, replay, solve
from .program import Program, Query, load_program, parse_program, parse_query, render, validate

__all__ = [
    "Program", "Query", "SearchConfig", "SearchResult", "Solution", "State", "Status",
    "load_program", "parse_program", "parse_query", "render", "replay", "solve", "validate",
]
