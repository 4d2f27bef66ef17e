"""How many MIU strings first appear at each depth, with the time to reach them."""
import argparse
import time

from llp.cli import example_path
from llp.engine import reachable_levels
from llp.program import load_program


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--depth", type=int, default=8)
    args = parser.parse_args()
    program = load_program(example_path("miu").read_text())
    start = time.perf_counter()
    levels = reachable_levels(program, args.depth)
    elapsed = time.perf_counter() - start
    total = 0
    print("depth  new  total  longest  i-count mod 3")
    for d, level in enumerate(levels):
        total += len(level)
        strings = ["".join(st.linear[0].args[0].items) for st in level]
        residues = sorted({s.count("i") % 3 for s in strings})
        print(f"{d:>5} {len(level):>5} {total:>6} {max(map(len, strings)):>8}  {residues}")
    print(f"{elapsed:.2f}s")


if __name__ == "__main__":
    main()
