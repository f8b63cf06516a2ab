"""Horn-clause theories, their composition algebra, and the demo interpreter."""

from .compose import IsaExpr, RetractExpr, TheoryExpr, UnionExpr, compose, isa, retract, union
from .reader import TheorySyntaxError, parse_clauses, parse_term, parse_theory
from .solve import Answer, DemoResult, demo, prove, resolve, unify
from .terms import Atom, Clause, Compound, Num, Term, Theory, Var, defined_predicates, format_theory, indicator

__all__ = [
    "Answer",
    "Atom",
    "Clause",
    "Compound",
    "DemoResult",
    "IsaExpr",
    "Num",
    "RetractExpr",
    "Term",
    "Theory",
    "TheoryExpr",
    "TheorySyntaxError",
    "UnionExpr",
    "Var",
    "compose",
    "defined_predicates",
    "demo",
    "format_theory",
    "indicator",
    "isa",
    "parse_clauses",
    "parse_term",
    "parse_theory",
    "prove",
    "resolve",
    "retract",
    "union",
    "unify",
]
