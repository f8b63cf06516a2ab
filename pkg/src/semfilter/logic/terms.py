"""Terms, clauses and theories."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True)
class Var:
    name: str
    uid: int = 0

    def __str__(self):
        return self.name if self.uid == 0 else f"{self.name}_{self.uid}"


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return quote_atom(self.name)


@dataclass(frozen=True)
class Num:
    value: int | float

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError("compound terms need at least one argument")

    def __str__(self):
        return f"{quote_atom(self.functor)}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, Atom, Num, Compound]

_PLAIN_ATOM = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def quote_atom(name: str) -> str:
    if _PLAIN_ATOM.match(name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def indicator(term: Term) -> tuple[str, int]:
    """Predicate name and arity of a callable term."""
    if isinstance(term, Atom):
        return (term.name, 0)
    if isinstance(term, Compound):
        return (term.functor, len(term.args))
    raise TypeError(f"not a callable term: {term}")


def is_callable(term) -> bool:
    return isinstance(term, (Atom, Compound))


def is_ground(term: Term) -> bool:
    if isinstance(term, Var):
        return False
    if isinstance(term, Compound):
        return all(is_ground(a) for a in term.args)
    return True


def variables(term: Term, acc: list | None = None) -> list[Var]:
    """Distinct variables of ``term`` in order of first occurrence."""
    acc = [] if acc is None else acc
    if isinstance(term, Var):
        if term not in acc:
            acc.append(term)
    elif isinstance(term, Compound):
        for a in term.args:
            variables(a, acc)
    return acc


@dataclass(frozen=True)
class Clause:
    """A Horn clause; ``origin`` names the theory it was read from.

    ``origin`` is bookkeeping for provenance and takes no part in equality.
    """

    head: Term
    body: tuple = ()
    origin: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if not is_callable(self.head):
            raise ValueError(f"clause head must be an atom or compound: {self.head}")
        for goal in self.body:
            if not is_callable(goal):
                raise ValueError(f"clause body goals must be atoms or compounds: {goal}")

    @property
    def indicator(self) -> tuple[str, int]:
        return indicator(self.head)

    @property
    def is_fact(self) -> bool:
        return not self.body

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(g) for g in self.body)}."


@dataclass(frozen=True)
class Theory:
    name: str
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))

    def __len__(self):
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def with_origin(self, origin: str | None = None) -> "Theory":
        origin = origin or self.name
        return Theory(self.name, tuple(Clause(c.head, c.body, origin) for c in self.clauses))


def defined_predicates(theory: Theory) -> set[tuple[str, int]]:
    return {c.indicator for c in theory.clauses}


def format_theory(theory: Theory) -> str:
    lines = [f"theory {theory.name}."]
    lines += [str(c) for c in theory.clauses]
    lines.append("end.")
    return "\n".join(lines) + "\n"
