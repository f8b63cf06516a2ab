from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_frame
from oracles import fixpoint, goal_answers
from semfilter.completion import (
    ACCEPTED,
    INCOMPLETE,
    REJECTED,
    ContextFacts,
    Verdict,
    check_coherence,
    complete,
    complete_and_check,
    filter_hypotheses,
    frame_to_theory,
)
from semfilter.frames import DEFAULT, INFERRED, PARSED, FrameHypothesis, default_schema
from semfilter.logic import Clause, Compound, Theory, Var, compose, demo, isa, parse_term, parse_theory, union

SCHEMA = default_schema()
EMPTY = Theory("empty")
MINI_KB = parse_theory("prefix(p21, lausanne).\ngis(lausanne, city).\n", "kb")
P21 = ContextFacts.from_text("caller_prefix(p21).")


def frame(**values):
    return FrameHypothesis.from_values({s: (v, 0.5) for s, v in values.items()}, SCHEMA)


def test_frame_to_theory():
    assert [str(c) for c in frame_to_theory(frame(locality="lausanne"))] == ["locality(lausanne)."]
    assert [str(c) for c in frame_to_theory(FrameHypothesis(), P21)] == ["caller_prefix(p21)."]
    t = frame_to_theory(FrameHypothesis())
    assert t.name == "query" and len(t) == 0


def test_scenario_with_context(theories):
    done = complete(FrameHypothesis(), theories["rules"], theories["defaults"], MINI_KB, P21, SCHEMA)
    assert done.values() == {"identification": "person", "locality": "lausanne", "loc_type": "city",
                             "phone_type": "standard"}
    assert done.filled["locality"].provenance == INFERRED
    assert done.filled["identification"].provenance == DEFAULT
    assert done.verdict == Verdict(ACCEPTED)
    # the same binding by bottom-up evaluation of the composed theory
    expr = union(isa(frame_to_theory(FrameHypothesis(), P21), theories["defaults"]), theories["rules"], MINI_KB)
    model = fixpoint(compose(expr).clauses)
    assert goal_answers(model, parse_term("locality(X)")) == {(("a", "lausanne"),)}


def test_scenario_without_context(theories):
    done = complete(FrameHypothesis(), theories["rules"], theories["defaults"], EMPTY, None, SCHEMA)
    assert done.values() == {"identification": "person", "loc_type": "city", "phone_type": "standard"}
    assert done.verdict == Verdict(INCOMPLETE, missing=("locality",))
    assert str(done.verdict) == "incomplete(locality)"
    assert all(f.provenance == DEFAULT for _, f in done.fills)


def test_parsed_value_beats_defaults(theories):
    defaults = parse_theory("locality(lausanne).\nidentification(person).\n", "query_defaults")
    done = complete(frame(locality="geneva"), theories["rules"], defaults, MINI_KB, P21, SCHEMA)
    assert done.filled["locality"].value == "geneva"
    assert done.filled["locality"].provenance == PARSED
    assert done.filled["locality"].weight == 0.5


def test_non_parsed_fills_have_no_weight(theories):
    done = complete(FrameHypothesis(), theories["rules"], theories["defaults"], MINI_KB, P21, SCHEMA)
    assert done.to_dict()["slots"]["phone_type"] == {"value": "standard", "weight": None, "provenance": DEFAULT}
    assert done.overall_weight == 0.0


def test_depth_limit_leaves_slot_unfilled(theories):
    rules = parse_theory("locality(X) :- locality(X).", "rules")
    done = complete(FrameHypothesis(), rules, EMPTY, EMPTY, None, SCHEMA, depth_limit=8)
    assert "locality" in done.verdict.missing


# ---- coherence ----------------------------------------------------------

def violations(query_fills, kb, constraints, context):
    q = complete(FrameHypothesis.from_values({s: (v, 1.0) for s, v in query_fills.items()}, SCHEMA),
                 EMPTY, EMPTY, EMPTY, context, SCHEMA)
    expr = union(frame_to_theory(FrameHypothesis(q.fills), context), kb, constraints)
    return q, goal_answers(fixpoint(compose(expr).clauses), parse_term("violation(R)"))


def test_mismatch_rejected(theories):
    q, oracle = violations({"locality": "geneve"}, theories["kb"], theories["constraints"], P21)
    assert oracle == {(("a", "prefix_mismatch"),)}
    verdict = check_coherence(q, theories["kb"], theories["constraints"], P21)
    assert verdict == Verdict(REJECTED, reason="prefix_mismatch")
    assert str(verdict) == "rejected(prefix_mismatch)"


def test_consistent_accepted(theories):
    q, oracle = violations({"locality": "lausanne"}, theories["kb"], theories["constraints"], P21)
    assert oracle == set()
    assert check_coherence(q, theories["kb"], theories["constraints"], P21).accepted


def test_empty_constraints_accept(theories):
    q, _ = violations({"locality": "geneve"}, theories["kb"], EMPTY, P21)
    assert check_coherence(q, theories["kb"], EMPTY, P21).accepted
    assert check_coherence(q, theories["kb"], None, P21).accepted


def test_incomplete_query_can_still_be_rejected(theories):
    constraints = parse_theory("violation(no_name) :- locality(geneve).", "constraints")
    done = complete_and_check(frame(locality="geneve"), EMPTY, EMPTY, EMPTY, constraints, None, SCHEMA)
    assert done.verdict == Verdict(REJECTED, reason="no_name")


# ---- filtering ----------------------------------------------------------

def test_filter_skips_incoherent(theories):
    bad = FrameHypothesis.from_values({"locality": ("geneve", 0.9)}, SCHEMA)
    good = FrameHypothesis.from_values({"locality": ("lausanne", 0.6)}, SCHEMA)
    args = (theories["rules"], theories["defaults"], theories["kb"], theories["constraints"], P21, SCHEMA)
    chosen = filter_hypotheses([bad, good], *args)
    assert chosen.values()["locality"] == "lausanne" and chosen.verdict.accepted
    assert chosen.overall_weight == 0.6
    (single,) = [filter_hypotheses([good], *args)]
    assert single.verdict.accepted
    rejected = filter_hypotheses([bad, FrameHypothesis.from_values({"locality": ("sion", 0.4)}, SCHEMA)], *args)
    assert rejected.verdict.status == REJECTED and rejected.values()["locality"] == "geneve"


def test_filter_empty_list(theories):
    done = filter_hypotheses([], theories["rules"], theories["defaults"], EMPTY, None, None, SCHEMA)
    assert done.source == FrameHypothesis()
    assert done.verdict.status == INCOMPLETE


def test_filter_falls_back_to_top_incomplete(theories):
    hs = [frame(name="dupont"), FrameHypothesis()]
    done = filter_hypotheses(hs, theories["rules"], theories["defaults"], EMPTY, None, None, SCHEMA)
    assert done.values()["name"] == "dupont" and done.verdict.missing == ("locality",)


def test_context_must_be_ground():
    with pytest.raises(ValueError):
        ContextFacts((Clause(Compound("caller_prefix", (Var("X"),))),))
    with pytest.raises(ValueError):
        ContextFacts.from_text("p(X) :- q(X).")


# ---- properties ---------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_override_and_provenance(theories, seed):
    rng = random.Random(seed)
    hyp = random_frame(rng, SCHEMA)
    context = P21 if rng.random() < 0.5 else None
    done = complete(hyp, theories["rules"], theories["defaults"], theories["kb"], context, SCHEMA)
    for slot, fill in hyp.fills:
        assert done.filled[slot] == fill
    defaults_facts = {str(c) for c in theories["defaults"].clauses if c.is_fact}
    for slot, fill in done.fills:
        if fill.provenance == PARSED:
            assert slot in hyp.filled
        elif fill.provenance == DEFAULT:
            assert f"{slot}({fill.value})." in defaults_facts
        else:
            assert fill.provenance == INFERRED
            only_defaults = demo(theories["defaults"], Compound(slot, (Var("X"),)))
            assert fill.value not in {str(a["X"]) for a in only_defaults}
    if done.verdict.accepted:
        assert set(SCHEMA.mandatory) <= set(done.filled)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_monotone_fallback(theories, seed):
    rng = random.Random(seed)
    hs = [random_frame(rng, SCHEMA) for _ in range(rng.randint(1, 4))]
    args = (theories["rules"], theories["defaults"], theories["kb"], theories["constraints"], P21, SCHEMA)
    each = [complete_and_check(h, *args) for h in hs]
    chosen = filter_hypotheses(hs, *args)
    if any(c.verdict.accepted for c in each):
        assert chosen.verdict.accepted
        assert chosen == next(c for c in each if c.verdict.accepted)
    else:
        assert chosen == each[0]
