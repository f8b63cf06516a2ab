"""Unification and the ``demo`` meta-interpreter over composed theories."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .compose import TheoryExpr, compose
from .reader import parse_term
from .terms import Clause, Compound, Term, Var, indicator, is_callable, is_ground, variables

DEFAULT_DEPTH_LIMIT = 64
DEFAULT_MAX_ANSWERS = 16


def walk(term: Term, subst: dict) -> Term:
    while isinstance(term, Var) and term in subst:
        term = subst[term]
    return term


def resolve(term: Term, subst: dict) -> Term:
    """Apply ``subst`` all the way down."""
    term = walk(term, subst)
    if isinstance(term, Compound):
        return Compound(term.functor, tuple(resolve(a, subst) for a in term.args))
    return term


def _occurs(var: Var, term: Term, subst: dict) -> bool:
    term = walk(term, subst)
    if term == var:
        return True
    if isinstance(term, Compound):
        return any(_occurs(var, a, subst) for a in term.args)
    return False


def _unify(a: Term, b: Term, subst: dict) -> dict | None:
    s = dict(subst)
    pending = [(a, b)]
    while pending:
        x, y = pending.pop()
        x, y = walk(x, s), walk(y, s)
        if x == y:
            continue
        if isinstance(x, Var) or isinstance(y, Var):
            var, other = (x, y) if isinstance(x, Var) else (y, x)
            if _occurs(var, other, s):
                return None
            s[var] = other
        elif (
            isinstance(x, Compound)
            and isinstance(y, Compound)
            and x.functor == y.functor
            and len(x.args) == len(y.args)
        ):
            pending.extend(zip(x.args, y.args))
        else:
            return None
    return s


def unify(a: Term, b: Term, subst: dict | None = None) -> dict | None:
    """Most general unifier of ``a`` and ``b`` (with occurs check), or ``None``.

    The result is idempotent: every bound variable maps to a term that
    contains no bound variables.
    """
    s = _unify(a, b, subst or {})
    if s is None:
        return None
    return {v: resolve(t, s) for v, t in s.items()}


def _distinct(goal, subst):
    x, y = (resolve(a, subst) for a in goal.args)
    return subst if is_ground(x) and is_ground(y) and x != y else None


BUILTINS = {
    ("true", 0): lambda goal, subst: subst,
    ("distinct", 2): _distinct,
}


def _rename(clause: Clause, uid: int) -> tuple[Term, tuple]:
    mapping: dict = {}

    def ren(t):
        if isinstance(t, Var):
            if t not in mapping:
                mapping[t] = Var(t.name, uid)
            return mapping[t]
        if isinstance(t, Compound):
            return Compound(t.functor, tuple(ren(a) for a in t.args))
        return t

    return ren(clause.head), tuple(ren(g) for g in clause.body)


def _canonical(terms: list[Term]) -> list[Term]:
    mapping: dict = {}

    def canon(t):
        if isinstance(t, Var):
            if t not in mapping:
                mapping[t] = Var(f"_{len(mapping)}")
            return mapping[t]
        if isinstance(t, Compound):
            return Compound(t.functor, tuple(canon(a) for a in t.args))
        return t

    return [canon(t) for t in terms]


@dataclass(frozen=True)
class Answer:
    """Bindings for the goal's named variables.

    ``clause`` is the clause that resolved the goal itself (``None`` for a
    builtin), which callers use to tell where an answer came from.
    """

    bindings: tuple[tuple[str, Term], ...]
    clause: Clause | None = field(default=None, compare=False)

    def __getitem__(self, name: str) -> Term:
        return dict(self.bindings)[name]

    def as_dict(self) -> dict[str, Term]:
        return dict(self.bindings)


@dataclass
class DemoResult:
    answers: list[Answer]
    incomplete: bool = False  # some branch was cut at the depth bound
    truncated: bool = False  # stopped at the answer bound

    def __iter__(self) -> Iterator[Answer]:
        return iter(self.answers)

    def __len__(self):
        return len(self.answers)

    def __getitem__(self, i):
        return self.answers[i]


def demo(
    expr: TheoryExpr,
    goal: Term | str,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
    max_answers: int = DEFAULT_MAX_ANSWERS,
) -> DemoResult:
    """Prove ``goal`` against the composed theory by SLD resolution.

    Search is depth-first with leftmost goal selection, trying clauses in
    composed order. Answers come back in discovery order with variants
    removed. A goal whose proof-tree depth reaches ``depth_limit`` is not
    expanded and the result is flagged ``incomplete``.
    """
    if depth_limit < 1 or max_answers < 1:
        raise ValueError("depth_limit and max_answers must be positive")
    if isinstance(goal, str):
        goal = parse_term(goal)
    if not is_callable(goal):
        raise ValueError(f"malformed goal: {goal}")
    theory = compose(expr)
    index: dict[tuple[str, int], list[Clause]] = {}
    for clause in theory.clauses:
        index.setdefault(clause.indicator, []).append(clause)

    named = [v for v in variables(goal) if not v.name.startswith("_")]
    uids = itertools.count(1)
    result = DemoResult([])

    def expand(goals, subst, top):
        g, depth, rest = goals
        g = walk(g, subst)
        ind = indicator(g)
        builtin = BUILTINS.get(ind)
        if builtin is not None:
            s = builtin(g, subst)
            if s is not None:
                yield rest, s, top
            return
        if depth >= depth_limit:
            result.incomplete = True
            return
        for clause in index.get(ind, ()):
            head, body = _rename(clause, next(uids))
            s = _unify(g, head, subst)
            if s is None:
                continue
            new = rest
            for b in reversed(body):
                new = (b, depth + 1, new)
            yield new, s, clause if top is None else top

    seen = set()
    stack = [iter([((goal, 0, None), {}, None)])]
    while stack:
        try:
            goals, subst, top = next(stack[-1])
        except StopIteration:
            stack.pop()
            continue
        if goals is None:
            values = _canonical([resolve(v, subst) for v in named])
            key = tuple(values)
            if key in seen:
                continue
            seen.add(key)
            result.answers.append(Answer(tuple((v.name, t) for v, t in zip(named, values)), top))
            if len(result.answers) >= max_answers:
                result.truncated = True
                break
            continue
        stack.append(expand(goals, subst, top))
    return result


def prove(expr: TheoryExpr, goal: Term | str, **limits) -> bool:
    return bool(demo(expr, goal, max_answers=1, **limits).answers)

