"""Run the four bundled programs on their reference queries and print the outcomes."""
import argparse
import time

from llp import SearchConfig, parse_query, solve
from llp.cli import example_path
from llp.program import load_program, render_term

RUNS = [
    ("factorial", "fact(5,X)", "partial", 64),
    ("max", "i(X)", "exhaustive", 64),
    ("menu", "p(h) * p(c) * p(f)", "partial", 10),
    ("menu", "p(h) * p(c) * p(c)", "partial", 10),
    ("menu", "p(fi) * p(c) * p(f)", "partial", 10),
    ("miu", 's("mu")', "partial", 8),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--strategy", choices=("bfs", "dfs", "iddfs"), default="bfs")
    parser.add_argument("--miu-depth", type=int, default=8)
    args = parser.parse_args()
    for name, query, mode, depth in RUNS:
        if name == "miu":
            depth = args.miu_depth
        program = load_program(example_path(name).read_text())
        cfg = SearchConfig(strategy=args.strategy, max_depth=depth, mode=mode)
        start = time.perf_counter()
        result = solve(program, parse_query(query), cfg)
        elapsed = time.perf_counter() - start
        if result.solutions:
            sol = result.solutions[0]
            answer = ", ".join(f"{n} = {render_term(t)}" for n, t in sol.answer) or "yes"
            outcome = f"{answer} at depth {sol.depth}"
        else:
            outcome = result.status.value
        print(f"{name:<10} {query:<22} {mode:<10} {outcome:<28} {elapsed:7.3f}s")


if __name__ == "__main__":
    main()
