"""Coherence filtering and default completion of frame hypotheses."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .frames import DEFAULT, INFERRED, FrameHypothesis, FrameSchema, SlotFill, default_schema
from .logic import Atom, Clause, Compound, Num, Term, Theory, Var, demo, isa, parse_theory, union
from .logic.solve import DEFAULT_DEPTH_LIMIT
from .logic.terms import is_ground

ACCEPTED = "accepted"
REJECTED = "rejected"
INCOMPLETE = "incomplete"

@dataclass(frozen=True)
class ContextFacts:
    """Ground facts about the call, e.g. ``caller_prefix(p21)``."""

    facts: tuple[Clause, ...] = ()
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "facts", tuple(self.facts))
        for fact in self.facts:
            if fact.body or not is_ground(fact.head):
                raise ValueError(f"context facts must be ground facts: {fact}")

    @classmethod
    def from_text(cls, text: str, source: str = "") -> "ContextFacts":
        return cls(parse_theory(text, name="context").clauses, source)


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str | None = None
    missing: tuple[str, ...] = ()

    @property
    def accepted(self) -> bool:
        return self.status == ACCEPTED

    def to_dict(self) -> dict:
        out: dict = {"status": self.status}
        if self.status == REJECTED:
            out["reason"] = self.reason
        if self.status == INCOMPLETE:
            out["missing"] = list(self.missing)
        return out

    def __str__(self):
        if self.status == REJECTED:
            return f"rejected({self.reason})"
        if self.status == INCOMPLETE:
            return f"incomplete({', '.join(self.missing)})"
        return self.status


@dataclass(frozen=True)
class CompletedQuery:
    fills: tuple[tuple[str, SlotFill], ...]
    overall_weight: float
    verdict: Verdict
    source: FrameHypothesis | None = None

    @property
    def filled(self) -> dict[str, SlotFill]:
        return dict(self.fills)

    def values(self) -> dict[str, str]:
        return {s: f.value for s, f in self.fills}

    def to_dict(self) -> dict:
        return {
            "slots": {s: {"value": f.value, "weight": f.weight, "provenance": f.provenance} for s, f in self.fills},
            "overall_weight": self.overall_weight,
            "verdict": self.verdict.to_dict(),
        }


def _slot_fact(slot: str, value: str, origin: str) -> Clause:
    return Clause(Compound(slot, (Atom(value),)), (), origin)


def frame_to_theory(frame: FrameHypothesis, context: ContextFacts | None = None) -> Theory:
    """One ``slot(value)`` fact per filled slot, then the context facts."""
    clauses = [_slot_fact(slot, fill.value, "query") for slot, fill in frame.fills]
    if context is not None:
        clauses.extend(Clause(c.head, c.body, "query") for c in context.facts)
    return Theory("query", tuple(clauses))


def _value_text(term: Term) -> str:
    if isinstance(term, Atom):
        return term.name
    if isinstance(term, Num):
        return str(term.value)
    return str(term)


def complete(
    frame: FrameHypothesis,
    rules: Theory,
    defaults: Theory,
    kb: Theory,
    context: ContextFacts | None = None,
    schema: FrameSchema | None = None,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
) -> CompletedQuery:
    """Fill the frame's missing mandatory slots by deduction.

    Each missing slot ``s`` takes the first answer to ``s(X)`` against
    ``(query isa defaults) + rules + kb``. A fill is tagged ``default`` when
    that answer is a fact of ``defaults`` and ``inferred`` otherwise. Slots
    already in the frame are left exactly as parsed.
    """
    schema = schema or default_schema()
    expr = union(isa(frame_to_theory(frame, context), defaults), rules, kb)
    fills = dict(frame.fills)
    missing = []
    for slot in schema.mandatory:
        if slot in fills:
            continue
        result = demo(expr, Compound(slot, (Var("X"),)), depth_limit=depth_limit, max_answers=1)
        if not result.answers:
            missing.append(slot)
            continue
        answer = result.answers[0]
        value = answer["X"]
        if not is_ground(value):
            missing.append(slot)
            continue
        clause = answer.clause
        from_defaults = clause is not None and clause.is_fact and any(c is clause for c in defaults.clauses)
        fills[slot] = SlotFill(_value_text(value), None, DEFAULT if from_defaults else INFERRED)
    ordered = tuple((s, fills[s]) for s in schema.names if s in fills)
    ordered += tuple((s, f) for s, f in fills.items() if s not in schema)
    verdict = Verdict(INCOMPLETE, missing=tuple(missing)) if missing else Verdict(ACCEPTED)
    return CompletedQuery(ordered, frame.overall_weight, verdict, frame)


def query_theory(query: CompletedQuery, context: ContextFacts | None = None) -> Theory:
    return frame_to_theory(FrameHypothesis(query.fills), context)


def check_coherence(
    query: CompletedQuery,
    kb: Theory,
    constraints: Theory | None,
    context: ContextFacts | None = None,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
) -> Verdict:
    """``rejected(R)`` for the first provable ``violation(R)``, else ``accepted``."""
    if constraints is None or not constraints.clauses:
        return Verdict(ACCEPTED)
    expr = union(query_theory(query, context), kb, constraints)
    result = demo(expr, Compound("violation", (Var("R"),)), depth_limit=depth_limit, max_answers=1)
    if result.answers:
        return Verdict(REJECTED, reason=_value_text(result.answers[0]["R"]))
    return Verdict(ACCEPTED)


def complete_and_check(frame, rules, defaults, kb, constraints=None, context=None, schema=None,
                       depth_limit=DEFAULT_DEPTH_LIMIT) -> CompletedQuery:
    """Complete one hypothesis, then let the constraints veto it."""
    done = complete(frame, rules, defaults, kb, context, schema, depth_limit)
    coherence = check_coherence(done, kb, constraints, context, depth_limit)
    if not coherence.accepted:
        done = replace(done, verdict=coherence)
    return done


def filter_hypotheses(
    ranked: Sequence[FrameHypothesis],
    rules: Theory,
    defaults: Theory,
    kb: Theory,
    constraints: Theory | None = None,
    context: ContextFacts | None = None,
    schema: FrameSchema | None = None,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
) -> CompletedQuery:
    """Commit to the best-ranked hypothesis that completes and is coherent.

    When none qualifies, the top hypothesis's completion is returned with its
    failing verdict; there is no clarification path.
    """
    ranked = list(ranked) or [FrameHypothesis()]
    first = None
    for frame in ranked:
        done = complete_and_check(frame, rules, defaults, kb, constraints, context, schema, depth_limit)
        if done.verdict.accepted:
            return done
        first = first or done
    return first
