"""Terms, substitutions, unification and ground evaluation.

Symbols are plain ``str`` and integers are plain ``int`` (unbounded), so a
ground symbol sequence is a tuple of interned strings and hashes at C speed.
Variables, compounds and sequences are small frozen dataclasses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Compound:
    functor: str
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError(f"compound {self.functor!r} needs at least one argument")

    def __repr__(self) -> str:
        return f"{self.functor}({', '.join(map(repr, self.args))})"


@dataclass(frozen=True, slots=True)
class Seq:
    """A sequence of symbols; a ``Var`` item is a segment variable."""

    items: tuple
    ground: bool = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for item in self.items:
            if not (isinstance(item, Var) or _is_symbol(item)):
                raise TypeError(f"sequence items must be symbols or variables, got {item!r}")
        object.__setattr__(self, "ground", not any(isinstance(i, Var) for i in self.items))

    @classmethod
    def unchecked(cls, items: tuple, ground: bool) -> "Seq":
        """Build from items already known to be valid (hot path of splicing)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "items", items)
        object.__setattr__(obj, "ground", ground)
        return obj

    def __repr__(self) -> str:
        return f"Seq({''.join(map(str, self.items))!r})"


Term = Union[Var, str, int, Compound, Seq]
Substitution = Mapping[str, Term]

ARITH_FUNCTORS = frozenset({"add", "sub", "mul"})
GUARD_FUNCTORS = frozenset({"lt", "geq"})


def _is_symbol(t) -> bool:
    return type(t) is str


def _is_int(t) -> bool:
    return type(t) is int


def seq(text: str) -> Seq:
    """Ground sequence with one symbol per character."""
    return Seq(tuple(text))


class EvalError(Exception):
    pass


class NonGround(EvalError):
    """An unbound variable was reached during evaluation."""


class NotNumeric(EvalError):
    """A symbol, sequence or ordinary compound was reached in arithmetic."""


# -- inspection ---------------------------------------------------------------

def variables(t: Term) -> set[str]:
    return set(ordered_variables(t))


def ordered_variables(t: Term) -> list[str]:
    """Variable names in order of first occurrence, left to right."""
    out: dict[str, None] = {}
    _collect_vars(t, out)
    return list(out)


def _collect_vars(t, out: dict):
    if isinstance(t, Var):
        out[t.name] = None
    elif isinstance(t, Compound):
        for a in t.args:
            _collect_vars(a, out)
    elif isinstance(t, Seq):
        for a in t.items:
            if isinstance(a, Var):
                out[a.name] = None


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    if isinstance(t, Compound):
        return all(is_ground(a) for a in t.args)
    if isinstance(t, Seq):
        return t.ground
    return True


def contains_functor(t: Term, functors) -> bool:
    if isinstance(t, Compound):
        return t.functor in functors or any(contains_functor(a, functors) for a in t.args)
    return False


def occurs(name: str, t: Term) -> bool:
    if isinstance(t, Var):
        return t.name == name
    if isinstance(t, Compound):
        return any(occurs(name, a) for a in t.args)
    if isinstance(t, Seq):
        return any(isinstance(a, Var) and a.name == name for a in t.items)
    return False


def sort_key(t: Term):
    """Total order over terms; used for canonical state ordering."""
    if _is_int(t):
        return (0, t)
    if _is_symbol(t):
        return (1, t)
    if isinstance(t, Seq):
        if t.ground:
            return (2, t.items)
        return (2, tuple(("", a.name) if isinstance(a, Var) else (a, "") for a in t.items))
    if isinstance(t, Compound):
        return (3, t.functor, len(t.args), tuple(sort_key(a) for a in t.args))
    return (4, t.name)


# -- substitution -------------------------------------------------------------

def as_segment(t: Term) -> tuple | None:
    """Items a term contributes when spliced into a sequence, or None if it cannot be."""
    if isinstance(t, Seq):
        return t.items
    if _is_symbol(t):
        return (t,)
    return None


def apply_subst(t: Term, s: Substitution) -> Term:
    if not s:
        return t
    if isinstance(t, Var):
        return s.get(t.name, t)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(apply_subst(a, s) for a in t.args))
    if isinstance(t, Seq):
        if t.ground:
            return t
        items: list = []
        ground = True
        for a in t.items:
            if isinstance(a, Var):
                if a.name in s:
                    value = s[a.name]
                    seg = as_segment(value)
                    if seg is None:
                        raise TypeError(f"cannot splice {value!r} into a sequence")
                    items.extend(seg)
                    ground = ground and (not isinstance(value, Seq) or value.ground)
                else:
                    items.append(a)
                    ground = False
            else:
                items.append(a)
        return Seq.unchecked(tuple(items), ground)
    return t


def _bind(s: Substitution, name: str, value: Term) -> dict:
    # keep the substitution fully resolved so it stays idempotent
    single = {name: value}
    out = {k: apply_subst(v, single) for k, v in s.items()}
    out[name] = value
    return out


def unify(t1: Term, t2: Term, s: Substitution | None = None) -> dict | None:
    """Most general unifier extending ``s``, or None.

    Sequences with segment variables are matched against a ground side with
    :func:`llp.seqmatch.match_seq`. Associative matching has no single most
    general unifier, so the first solution in split order is returned.
    """
    return next(unifiers(t1, t2, s), None)


def unifiers(t1: Term, t2: Term, s: Substitution | None = None) -> Iterator[dict]:
    """Every unifier found by trying each segment split in turn."""
    return _unify([(t1, t2)], dict(s or {}))


def _unify(pairs: list, s: dict) -> Iterator[dict]:
    while pairs:
        a, b = pairs[-1]
        pairs = pairs[:-1]
        try:
            a = apply_subst(a, s)
            b = apply_subst(b, s)
        except TypeError:
            return  # segment variable bound to something unspliceable
        if a == b and type(a) is type(b):
            continue
        if isinstance(a, Var) or isinstance(b, Var):
            if not isinstance(a, Var):
                a, b = b, a
            if occurs(a.name, b):
                return
            try:
                s = _bind(s, a.name, b)
            except TypeError:
                return
        elif isinstance(a, Compound) and isinstance(b, Compound):
            if a.functor != b.functor or len(a.args) != len(b.args):
                return
            pairs = pairs + list(zip(a.args, b.args))
        elif isinstance(a, Seq) and isinstance(b, Seq):
            a_ground, b_ground = is_ground(a), is_ground(b)
            if a_ground and b_ground:
                return  # unequal ground sequences
            if not (a_ground or b_ground):
                raise ValueError("unification of two non-ground sequences is not supported")
            from .seqmatch import match_seq

            pattern, subject = (b, a) if a_ground else (a, b)
            for found in match_seq(pattern, subject, {}):
                s2 = s
                try:
                    for name, value in found.items():
                        s2 = _bind(s2, name, value)
                except TypeError:
                    continue
                yield from _unify(pairs, s2)
            return
        else:
            return
    yield s


def match(pattern: Term, ground: Term, s: Substitution) -> Iterator[dict]:
    """All substitutions extending ``s`` that make ``pattern`` equal the ground term."""
    if isinstance(pattern, Var):
        bound = s.get(pattern.name)
        if bound is None:
            out = dict(s)
            out[pattern.name] = ground
            yield out
        elif bound == ground and type(bound) is type(ground):
            yield dict(s)
        return
    if isinstance(pattern, Compound):
        if not isinstance(ground, Compound) or pattern.functor != ground.functor \
                or len(pattern.args) != len(ground.args):
            return
        if len(pattern.args) == 1:
            yield from match(pattern.args[0], ground.args[0], s)
        else:
            yield from _match_args(pattern.args, ground.args, 0, s)
        return
    if isinstance(pattern, Seq):
        if isinstance(ground, Seq):
            from .seqmatch import match_seq

            yield from match_seq(pattern, ground, s)
        return
    if pattern == ground and type(pattern) is type(ground):
        yield dict(s)


def _match_args(pats, grounds, i, s):
    if i == len(pats):
        yield dict(s)
        return
    for s2 in match(pats[i], grounds[i], s):
        yield from _match_args(pats, grounds, i + 1, s2)


# -- evaluation ---------------------------------------------------------------

def eval_arith(t: Term) -> int:
    if _is_int(t):
        return t
    if isinstance(t, Var):
        raise NonGround(f"unbound variable {t.name}")
    if isinstance(t, Compound) and t.functor in ARITH_FUNCTORS and len(t.args) == 2:
        x, y = eval_arith(t.args[0]), eval_arith(t.args[1])
        if t.functor == "add":
            return x + y
        if t.functor == "sub":
            return x - y
        return x * y
    raise NotNumeric(f"{t!r} is not numeric")


def eval_guard(g: Compound) -> bool:
    if not (isinstance(g, Compound) and g.functor in GUARD_FUNCTORS and len(g.args) == 2):
        raise ValueError(f"{g!r} is not a guard")
    x, y = eval_arith(g.args[0]), eval_arith(g.args[1])
    return x < y if g.functor == "lt" else x >= y


def evaluate(t: Term) -> Term:
    """Replace every arithmetic sub-term of a ground term by its value."""
    if isinstance(t, Compound):
        if t.functor in ARITH_FUNCTORS and len(t.args) == 2:
            return eval_arith(t)
        return Compound(t.functor, tuple(evaluate(a) for a in t.args))
    if isinstance(t, Var):
        raise NonGround(f"unbound variable {t.name}")
    if isinstance(t, Seq) and not t.ground:
        raise NonGround(f"unbound segment in {t!r}")
    return t


def instantiate(t: Term, s: Substitution) -> Term:
    return evaluate(apply_subst(t, s))


# -- states -------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class State:
    """Linear resources (multiset, canonically sorted) plus persistent ones (set)."""

    linear: tuple
    persistent: tuple = ()

    @classmethod
    def of(cls, linear=(), persistent=()) -> "State":
        return cls(tuple(sorted(linear, key=sort_key)),
                   tuple(sorted(set(persistent), key=sort_key)))


def canonical_key(st: State):
    # State.of already normalises both parts; re-normalise in case a caller
    # built a State directly
    return (tuple(sorted(st.linear, key=sort_key)),
            tuple(sorted(set(st.persistent), key=sort_key)))
