"""Reference implementations that share no code with the package under test."""
from __future__ import annotations

import itertools
from collections import Counter

# -- MU puzzle: plain string rewriting ----------------------------------------


def miu_successors(s: str) -> set[str]:
    out = set()
    if s.endswith("i"):
        out.add(s + "u")
    if s.startswith("m"):
        out.add("m" + s[1:] * 2)
    for k in range(len(s) - 2):
        if s[k:k + 3] == "iii":
            out.add(s[:k] + "u" + s[k + 3:])
    for k in range(len(s) - 1):
        if s[k:k + 2] == "uu":
            out.add(s[:k] + s[k + 2:])
    return out


def miu_reachable(depth: int, start: str = "mi") -> set[str]:
    seen = {start}
    frontier = {start}
    for _ in range(depth):
        frontier = {t for s in frontier for t in miu_successors(s)} - seen
        seen |= frontier
    return seen


# -- restaurant menu: explicit money-spending graph ----------------------------

# (price, items bought, grants a refillable coke)
MENU_ACTIONS = [
    (3, ("h", "c"), False),
    (4, ("fi", "c"), False),
    (3, ("h",), False),
    (4, ("fi",), False),
    (1, ("c",), True),
    (1, ("f",), False),
]


def menu_states(money: int = 4):
    """Every reachable (money left, items, refill) triple."""
    start = (money, (), False)
    seen = {start}
    todo = [start]
    while todo:
        left, items, refill = todo.pop()
        for price, bought, grants in MENU_ACTIONS:
            if left >= price:
                nxt = (left - price, tuple(sorted(items + bought)), refill or grants)
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
    return seen


def menu_can_obtain(wanted: list[str], money: int = 4) -> bool:
    need = Counter(wanted)
    for _left, items, refill in menu_states(money):
        have = Counter(items)
        if all(have[k] >= n or (k == "c" and refill) for k, n in need.items()):
            return True
    return False


# -- maximum: enumerate deletion orders ----------------------------------------


def max_survivors(values: list[int]) -> set[int]:
    """Values that can end up alone when a pair repeatedly loses its smaller member."""
    out = set()

    def go(vals):
        if len(vals) == 1:
            out.add(vals[0])
            return
        for a, b in itertools.permutations(range(len(vals)), 2):
            x, y = vals[a], vals[b]
            keep = y if x < y else x
            rest = [v for k, v in enumerate(vals) if k not in (a, b)]
            go(rest + [keep])

    go(list(values))
    return out


# -- sequences: every way to carve a string into pattern pieces -----------------


def seq_partitions(pattern: list, subject: str) -> list[dict]:
    """All bindings (var -> substring) under which ``pattern`` spells ``subject``.

    Pattern items are literal characters or ``("var", name)`` pairs. Each
    variable ranges over every substring of the subject, including the empty
    one, and the spliced result is compared with the subject.
    """
    names = sorted({item[1] for item in pattern if isinstance(item, tuple)})
    pieces = {subject[i:j] for i in range(len(subject) + 1) for j in range(i, len(subject) + 1)}
    found = []
    for combo in itertools.product(sorted(pieces), repeat=len(names)):
        env = dict(zip(names, combo))
        spelled = "".join(env[item[1]] if isinstance(item, tuple) else item for item in pattern)
        if spelled == subject:
            found.append(env)
    return found


# -- first-order terms: brute-force unifiers -----------------------------------
# terms are ("var", name), ("sym", name) or ("f", left, right)


def fo_terms(depth: int, symbols=("a", "b"), names=("X", "Y")) -> list:
    atoms = [("sym", s) for s in symbols] + [("var", v) for v in names]
    if depth <= 1:
        return atoms
    smaller = fo_terms(depth - 1, symbols, names)
    return atoms + [("f", l, r) for l in smaller for r in smaller]


def fo_apply(t, env):
    if t[0] == "var":
        return env.get(t[1], t)
    if t[0] == "f":
        return ("f", fo_apply(t[1], env), fo_apply(t[2], env))
    return t


def fo_unifiers(t1, t2, candidates, names=("X", "Y")) -> list[dict]:
    """Every substitution over ``names`` with values from ``candidates`` unifying t1, t2."""
    found = []
    for values in itertools.product(candidates, repeat=len(names)):
        env = dict(zip(names, values))
        if fo_apply(t1, env) == fo_apply(t2, env):
            found.append(env)
    return found
