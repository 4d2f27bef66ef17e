"""Checks shared by the unit tests and the acceptance suite."""
import itertools
import random

from conftest import load_example
from oracles import fo_terms, fo_unifiers
from llp.program import load_program
from llp.terms import Compound, Var, apply_subst, unify


def f(*args):
    return Compound("f", args)


# -- unification ----------------------------------------------------------------

def _to_term(t):
    if t[0] == "var":
        return Var(t[1])
    if t[0] == "sym":
        return t[1]
    return f(_to_term(t[1]), _to_term(t[2]))


def _from_env(env):
    return {name: _to_term(value) for name, value in env.items()}


def check_mgu_against_brute_force():
    """Compare unify with an exhaustive search over depth-2 substitutions.

    Returns the number of pairs checked and a list of failures.
    """
    terms = fo_terms(2)
    failures = []
    checked = 0
    for a, b in itertools.product(terms, repeat=2):
        checked += 1
        brute = fo_unifiers(a, b, terms)
        theta = unify(_to_term(a), _to_term(b), {})
        if theta is not None:
            if apply_subst(_to_term(a), theta) != apply_subst(_to_term(b), theta):
                failures.append((a, b, "unsound"))
                continue
        if not brute:
            continue
        if theta is None:
            failures.append((a, b, "missed a unifier"))
            continue
        for env in brute:
            sigma = _from_env(env)
            # sigma is an instance of theta iff sigma . theta agrees with sigma
            for name in ("X", "Y"):
                composed = apply_subst(apply_subst(Var(name), theta), sigma)
                if composed != apply_subst(Var(name), sigma):
                    failures.append((a, b, f"{env} is not an instance"))
                    break
    return checked, failures


def random_term(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([Var("X"), Var("Y"), Var("Z"), "a", "b", 0, 1])
    if rng.random() < 0.5:
        return f(random_term(rng, depth - 1))
    return Compound("g", (random_term(rng, depth - 1), random_term(rng, depth - 1)))


def unification_soundness_run(n=10_000, seed=7):
    """Unify ``n`` random pairs; return (successes, failures)."""
    rng = random.Random(seed)
    successes = failures = 0
    for _ in range(n):
        t1, t2 = random_term(rng, 4), random_term(rng, 4)
        s = unify(t1, t2, {})
        if s is None:
            continue
        successes += 1
        if apply_subst(t1, s) != apply_subst(t2, s) or any(
            apply_subst(apply_subst(t, s), s) != apply_subst(t, s) for t in (t1, t2)
        ):
            failures += 1
    return successes, failures


# -- reachable MIU strings ------------------------------------------------------

def miu_strings(keys):
    out = set()
    for linear, persistent in keys:
        assert persistent == ()
        (term,) = linear
        out.add("".join(term.args[0].items))
    return out


# -- programs with finite transition graphs --------------------------------------

COUNTDOWN = load_program("""
n(3).
! n(X), X >= 1 -o n(X - 1) * tick.
! tick * tick -o tock.
! n(0) * tock -o done.
""")

SHARED = load_program("""
a * a * b.
! k.
! a * k -o c.
! b * k -o !d.
! c * c, 1 < 2 -o e(c).
! e(X) * d -o f(X).
""")


def finite_programs():
    return {
        "max": load_example("max"),
        "menu": load_example("menu"),
        "countdown": COUNTDOWN,
        "shared": SHARED,
    }


FINITE_QUERIES = {
    "max": [("i(X)", "exhaustive"), ("i(X) * i(Y)", "partial"), ("i(X)", "partial")],
    "menu": [("p(X)", "partial"), ("p(X) * p(Y)", "partial"), ("p(h) * p(c) * p(c)", "partial"),
             ("p(X)", "exhaustive"), ("p(fi) * p(c) * p(f)", "partial")],
    "countdown": [("n(X)", "partial"), ("tock * n(X)", "partial"), ("done", "exhaustive")],
    "shared": [("c * c", "partial"), ("f(X)", "partial"), ("d", "partial"), ("e(Y)", "exhaustive")],
}


def all_finite_cases():
    for name, queries in FINITE_QUERIES.items():
        for query, mode in queries:
            yield name, query, mode
