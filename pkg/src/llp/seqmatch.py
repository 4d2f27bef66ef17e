"""Segment-variable matching of sequence patterns against ground sequences."""
from __future__ import annotations

from typing import Iterator

from .terms import NonGround, Seq, Substitution, Var, as_segment


def match_seq(pattern: Seq, subject: Seq, s: Substitution) -> Iterator[dict]:
    """Yield every extension of ``s`` under which ``pattern`` splices to ``subject``.

    Order is deterministic: the leftmost unbound segment variable tries the
    shortest split first. Segment variables may bind the empty sequence.
    """
    pat = pattern.items
    subj = subject.items
    n = len(subj)
    # literals after position i; a lower bound on what the tail consumes
    lit_after = [0] * (len(pat) + 1)
    for i in range(len(pat) - 1, -1, -1):
        lit_after[i] = lit_after[i + 1] + (0 if isinstance(pat[i], Var) else 1)

    def go(i: int, j: int, s: dict) -> Iterator[dict]:
        while i < len(pat):
            item = pat[i]
            if not isinstance(item, Var):
                if j >= n or subj[j] != item:
                    return
                i += 1
                j += 1
                continue
            bound = s.get(item.name)
            if bound is not None:
                seg = as_segment(bound)
                if seg is None or subj[j:j + len(seg)] != seg:
                    return
                i += 1
                j += len(seg)
                continue
            yield from _split(i, j, s, item.name)
            return
        if j == n:
            yield s

    def _split(i: int, j: int, s: dict, name: str) -> Iterator[dict]:
        rest = pat[i + 1:]
        longest = n - j - lit_after[i + 1]
        if longest < 0:
            return
        forced = _forced_length(rest, s, name, n - j)
        if forced is not None:
            # every later item has a known length, so the split point is fixed
            candidates = [j + forced] if 0 <= forced <= longest else []
        elif not isinstance(rest[0], Var):
            candidates = _positions(rest[0], j, j + longest)
        else:
            candidates = range(j, j + longest + 1)
        for k in candidates:
            s2 = dict(s)
            s2[name] = Seq.unchecked(subj[j:k], True)
            yield from go(i + 1, k, s2)

    def _positions(symbol: str, lo: int, hi: int) -> Iterator[int]:
        # split points k in [lo, hi] where subj[k] == symbol
        k = lo
        while k <= hi:
            try:
                k = subj.index(symbol, k, hi + 1)
            except ValueError:
                return
            yield k
            k += 1

    yield from go(0, 0, dict(s))


def _forced_length(rest, s, name: str, remaining: int) -> int | None:
    """Length ``name`` must take when everything after it has known length.

    Later occurrences of ``name`` itself repeat the same segment. Returns None
    if another unbound variable follows, or -1 if no length fits.
    """
    fixed = 0
    repeats = 1
    for item in rest:
        if not isinstance(item, Var):
            fixed += 1
        elif item.name == name:
            repeats += 1
        else:
            bound = s.get(item.name)
            seg = None if bound is None else as_segment(bound)
            if seg is None:
                return None
            fixed += len(seg)
    free = remaining - fixed
    if free < 0 or free % repeats:
        return -1
    return free // repeats


def splice(pattern: Seq, s: Substitution) -> Seq:
    items: list = []
    for item in pattern.items:
        if isinstance(item, Var):
            if item.name not in s:
                raise NonGround(f"segment variable {item.name} is unbound")
            value = s[item.name]
            seg = as_segment(value)
            if seg is None:
                raise TypeError(f"cannot splice {value!r} into a sequence")
            if isinstance(value, Seq) and not value.ground:
                raise NonGround(f"segment variable {item.name} is bound to {value!r}")
            items.extend(seg)
        else:
            items.append(item)
    return Seq.unchecked(tuple(items), True)
