from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_frames
from semfilter.chunker import Capture, Chunk, Terminal, parse_islands
from semfilter.frames import (
    FrameHypothesis,
    SchemaError,
    SlotFill,
    assemble_hypotheses,
    default_schema,
    format_schema,
    hypothesis_key,
    k_best_frames,
    parse_schema,
    slot_candidates,
)

SCHEMA = default_schema()


def chunk(cat, slot, value, span, weight, anchor=None):
    children = []
    if anchor is not None:
        children.append(Terminal("marker", "m", anchor, weight))
    children.append(Terminal("any", "any(1,2)", span, weight))
    return Chunk(cat, (min(span[0], (anchor or span)[0]), span[1]), weight, tuple(children),
                 ((slot, Capture(span, value)),))


def weights(hs):
    return [h.overall_weight for h in hs]


def test_single_capture_gives_two_hypotheses():
    hs = assemble_hypotheses([chunk("n", "name", "dupont", (3, 4), 0.5)], SCHEMA)
    assert len(hs) == 2
    assert hs[0].value("name") == "dupont" and hs[0].overall_weight == 0.5
    assert hs[1].fills == () and hs[1].overall_weight == 0.0


def test_frame_weight_is_min():
    hs = assemble_hypotheses(
        [chunk("n", "name", "dupont", (3, 4), 0.9), chunk("l", "locality", "lausanne", (5, 6), 0.6)], SCHEMA
    )
    (both,) = [h for h in hs if len(h.fills) == 2]
    assert both.overall_weight == 0.6
    # ranking is weight first, so the lone name reading still leads
    assert [weights(hs)[0], hs[0].filled.keys()] == [0.9, {"name"}]
    assert weights(hs) == [0.9, 0.6, 0.6, 0.0]


def test_competing_captures_ordered():
    chunks = [chunk("n", "name", "dupont", (3, 4), 0.8), chunk("n", "name", "dupond", (3, 4), 0.3)]
    hs = assemble_hypotheses(chunks, SCHEMA)
    assert [(h.value("name"), h.overall_weight) for h in hs] == [("dupont", 0.8), ("dupond", 0.3), (None, 0.0)]
    cands = slot_candidates(chunks, SCHEMA)
    assert [h.fills for h in hs] == [
        tuple((s, SlotFill(v, w)) for s, v, w in fills) for fills in brute_frames(cands, SCHEMA)
    ]


def test_k_best_frames():
    hs = [
        FrameHypothesis.from_values({"name": ("a", 0.7), "locality": ("b", 0.7)}, SCHEMA),
        FrameHypothesis.from_values({"name": ("a", 0.7)}, SCHEMA),
        FrameHypothesis.from_values({"name": ("c", 0.2)}, SCHEMA),
    ]
    ranked = sorted(reversed(hs), key=lambda h: hypothesis_key(h, SCHEMA))
    assert ranked == hs
    assert k_best_frames(ranked, 2) == hs[:2]
    assert k_best_frames(ranked, 1) == hs[:1]
    assert k_best_frames(ranked, 10) == hs
    with pytest.raises(ValueError):
        k_best_frames(ranked, 0)


def test_overlapping_captures_not_combined():
    chunks = [chunk("n", "name", "dupont a", (3, 5), 0.5), chunk("l", "locality", "a", (4, 5), 0.5)]
    hs = assemble_hypotheses(chunks, SCHEMA)
    assert all(len(h.fills) <= 1 for h in hs)


def test_capture_over_foreign_anchor_dropped():
    # "a" anchors the locality chunk, so a name reading that swallows it is not a value
    loc = chunk("l", "locality", "sion", (5, 6), 0.5, anchor=(4, 5))
    name = chunk("n", "name", "dupont a", (3, 5), 0.5, anchor=(0, 3))
    hs = assemble_hypotheses([loc, name], SCHEMA)
    assert {h.value("name") for h in hs} == {None}


def test_unknown_slot_ignored(caplog):
    hs = assemble_hypotheses([chunk("x", "colour", "red", (0, 1), 0.9)], SCHEMA)
    assert [h.fills for h in hs] == [()]
    assert "unknown slot colour" in caplog.text


def test_candidate_cap():
    chunks = [chunk("n", "name", f"v{i}", (i, i + 1), 0.1 * (i + 1)) for i in range(8)]
    cands = slot_candidates(chunks, SCHEMA)
    assert len(cands["name"]) == 5
    assert cands["name"][0].weight == pytest.approx(0.8)


def test_empty_hypothesis_always_present(phonebook):
    for text in ("zzz", "le numero de dupont a lausanne", "fax"):
        hs = assemble_hypotheses(parse_islands(phonebook, text), SCHEMA)
        assert FrameHypothesis() in hs
        assert FrameHypothesis().overall_weight == 0.0


def test_symbol_values_normalised():
    assert SCHEMA.normalize("locality", "La Chaux De Fonds") == "la_chaux_de_fonds"
    assert SCHEMA.normalize("name", "De  Rham") == "de rham"


def test_schema_file_round_trip():
    text = format_schema(SCHEMA)
    assert parse_schema(text) == SCHEMA
    assert parse_schema("# c\nslot a mandatory symbol\n\n").mandatory == ("a",)


@pytest.mark.parametrize(
    "text, message",
    [
        ("slot a optional symbol\n", "at least one mandatory"),
        ("slot a mandatory symbol\nslot a optional text\n", "duplicate"),
        ("slot a maybe symbol\n", "line 1"),
        ("slot a mandatory colour\n", "unknown value kind"),
        ("slot 9a mandatory symbol\n", "line 1"),
    ],
)
def test_schema_errors(text, message):
    with pytest.raises(SchemaError, match=message):
        parse_schema(text)


def test_hypothesis_to_dict():
    h = FrameHypothesis.from_values({"name": ("dupont", 0.5)}, SCHEMA)
    assert h.to_dict() == {"slots": {"name": {"value": "dupont", "weight": 0.5, "provenance": "parsed"}},
                           "overall_weight": 0.5}


SENTENCE_WORDS = ("le", "numero", "de", "dupont", "a", "lausanne", "fax", "qui", "habite", "sion", "martin")


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(SENTENCE_WORDS), min_size=1, max_size=9))
def test_matches_brute_force(phonebook, words):
    chunks = parse_islands(phonebook, words)
    hs = assemble_hypotheses(chunks, SCHEMA)
    want = brute_frames(slot_candidates(chunks, SCHEMA), SCHEMA)
    assert [tuple((s, f.value, f.weight) for s, f in h.fills) for h in hs] == want
    keys = [hypothesis_key(h, SCHEMA) for h in hs]
    assert len(set(keys)) == len(keys)  # total order over distinct hypotheses


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_extension_never_exceeds_new_weight(seed):
    rng = random.Random(seed)
    base = {s: (f"v{rng.randint(0, 3)}", rng.random()) for s in SCHEMA.names if rng.random() < 0.5}
    missing = [s for s in SCHEMA.names if s not in base]
    if not missing:
        return
    slot = rng.choice(missing)
    new_w = rng.random()
    extended = FrameHypothesis.from_values({**base, slot: ("x", new_w)}, SCHEMA)
    assert extended.overall_weight <= new_w
    if base:
        assert extended.overall_weight <= FrameHypothesis.from_values(base, SCHEMA).overall_weight
