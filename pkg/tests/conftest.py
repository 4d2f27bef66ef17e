import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from llp.cli import example_path
from llp.program import load_program
from llp.terms import Compound, Seq, Var

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None)
settings.load_profile("default")

# (criterion number, description, passed) recorded by test_acceptance.py
ACCEPTANCE_RESULTS: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, passed in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {description}")


def load_example(name: str):
    return load_program(example_path(name).read_text())


@pytest.fixture(scope="session")
def factorial():
    return load_example("factorial")


@pytest.fixture(scope="session")
def maximum():
    return load_example("max")


@pytest.fixture(scope="session")
def miu():
    return load_example("miu")


@pytest.fixture(scope="session")
def menu():
    return load_example("menu")


# -- term strategies ------------------------------------------------------------

variables = st.sampled_from(["X", "Y", "Z"]).map(Var)
symbols = st.sampled_from(["a", "b", "c"])
ints = st.integers(min_value=-5, max_value=5)
ground_seqs = st.lists(st.sampled_from("miu"), max_size=4).map(lambda cs: Seq(tuple(cs)))


def first_order_terms(leaves=None, max_leaves=8):
    leaves = leaves if leaves is not None else st.one_of(variables, symbols, ints, ground_seqs)
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.builds(lambda a: Compound("f", (a,)), inner),
            st.builds(lambda a, b: Compound("g", (a, b)), inner, inner),
        ),
        max_leaves=max_leaves,
    )


ground_terms = first_order_terms(st.one_of(symbols, ints, ground_seqs))
