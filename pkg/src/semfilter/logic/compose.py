"""Theory composition: union, predicate-level retraction and ``isa`` inheritance.

``isa(P, Q)`` is ``union(P, retract(Q, P))``: everything ``P`` defines
overrides ``Q``'s definition of the same predicate, and ``Q`` supplies the
rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .terms import Theory, defined_predicates


@dataclass(frozen=True)
class UnionExpr:
    left: "TheoryExpr"
    right: "TheoryExpr"

    def __str__(self):
        return f"({_name(self.left)} + {_name(self.right)})"


@dataclass(frozen=True)
class RetractExpr:
    left: "TheoryExpr"
    right: "TheoryExpr"

    def __str__(self):
        return f"({_name(self.left)} < {_name(self.right)})"


@dataclass(frozen=True)
class IsaExpr:
    left: "TheoryExpr"
    right: "TheoryExpr"

    def __str__(self):
        return f"({_name(self.left)} isa {_name(self.right)})"


TheoryExpr = Union[Theory, UnionExpr, RetractExpr, IsaExpr]


def _name(expr) -> str:
    return expr.name if isinstance(expr, Theory) else str(expr)


def union(*exprs: TheoryExpr) -> TheoryExpr:
    """Left-nested union of one or more expressions."""
    if not exprs:
        raise ValueError("union needs at least one operand")
    out = exprs[0]
    for e in exprs[1:]:
        out = UnionExpr(out, e)
    return out


def retract(left: TheoryExpr, right: TheoryExpr) -> RetractExpr:
    return RetractExpr(left, right)


def isa(left: TheoryExpr, right: TheoryExpr) -> IsaExpr:
    return IsaExpr(left, right)


def compose(expr: TheoryExpr) -> Theory:
    """Flatten ``expr`` into one clause list."""
    if isinstance(expr, Theory):
        return expr
    if isinstance(expr, UnionExpr):
        left, right = compose(expr.left), compose(expr.right)
        return Theory(str(expr), left.clauses + right.clauses)
    if isinstance(expr, RetractExpr):
        left, right = compose(expr.left), compose(expr.right)
        hidden = defined_predicates(right)
        return Theory(str(expr), tuple(c for c in left.clauses if c.indicator not in hidden))
    if isinstance(expr, IsaExpr):
        flat = compose(UnionExpr(expr.left, RetractExpr(expr.right, expr.left)))
        return Theory(str(expr), flat.clauses)
    raise TypeError(f"not a theory expression: {expr!r}")
