from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import ORACLE_GRAMMAR, random_grammar
from semfilter.grammar import (
    ANY,
    EMPTY,
    LITERAL,
    MARKER,
    GrammarError,
    defined_categories,
    dump_grammar,
    load_grammar,
)


def test_single_marker_declaration():
    g = load_grammar('marker intro = "le numero de" @ 0.9 ;')
    assert g.markers["intro"].phrase == ("le", "numero", "de")
    assert g.markers["intro"].weight == 0.9
    assert defined_categories(g) == set()


@pytest.mark.parametrize(
    "text, message",
    [
        ("rule a -> foo ;", "undefined category foo"),
        ("rule a -> a ;", "recursion cycle a"),
        ("rule a -> b ;\nrule b -> a ;", "recursion cycle a -> b -> a"),
        ('marker m = "x" @ 1.2 ;', "outside"),
        ("rule a -> empty@1.5 ;", "outside"),
        ("rule a -> any(0,2) ;", "wildcard bounds"),
        ("rule a -> any(3,2) ;", "wildcard bounds"),
        ("rule a -> any(1,11) ;", "wildcard bounds"),
        ("rule a -> any(1,2)>x any(1,1)>x ;", "slot x captured twice"),
        ("rule b -> any(1,1)>x ;\nrule a -> b any(1,1)>x ;", "slot x captured twice"),
        ('marker a = "x" @ 0.5 ;\nrule a -> "y" ;', "both a marker and a category"),
        ("rule a -> ;", "empty body"),
        ('marker m = "" @ 0.5 ;', "empty phrase"),
        ("rule a -> \"x\"", "unexpected 'end of input'"),
        ("frobnicate a ;", "unknown declaration"),
        ("rule a -> \"x\" ;\nstart zz ;", "undefined start category zz"),
        ("rule any -> \"x\" ;", "reserved name"),
        ('marker m = "x" @ 0.5 ;\nmarker m = "y" @ 0.5 ;', "duplicate marker"),
    ],
)
def test_load_errors(text, message):
    with pytest.raises(GrammarError, match=message):
        load_grammar(text)


def test_error_reports_line():
    with pytest.raises(GrammarError, match="line 3"):
        load_grammar('marker m = "x" @ 0.5 ;\n\nrule a -> nope ;\n')


def test_defined_categories():
    assert defined_categories(load_grammar("")) == set()
    g = load_grammar('rule name_part -> "x" ;\nrule locality_part -> "y" ;')
    assert defined_categories(g) == {"name_part", "locality_part"}


def test_item_kinds_and_slots():
    g = load_grammar(
        'marker m = "a b" @ 0.7 ;\n'
        'rule c -> m>mk "lit" any(1,3)>v empty>e ;\n'
        'rule d -> c>whole ;'
    )
    (rule,) = g.rules["c"]
    assert [i.kind for i in rule.body] == [MARKER, LITERAL, ANY, EMPTY]
    assert [i.slot for i in rule.body] == ["mk", None, "v", "e"]
    assert rule.body[3].weight == 0.0
    assert g.slots_of("d") == {"whole", "mk", "v", "e"}
    assert g.start == ("d",)


def test_multi_line_declarations_and_comments():
    g = load_grammar('rule c ->\n  "x"   # first\n  "y" ;\n')
    assert g.rules["c"][0].body[1].phrase == ("y",)


def test_phrases_lowercased():
    g = load_grammar('marker m = "Le Numero" @ 0.5 ;')
    assert g.markers["m"].phrase == ("le", "numero")


def test_topological_order(phonebook):
    order = phonebook.topological_order()
    assert order.index("city") < order.index("locality_part")


def test_oracle_grammar_has_six_rules():
    g = load_grammar(ORACLE_GRAMMAR)
    assert sum(len(r) for r in g.rules.values()) == 6


def test_deterministic_load(phonebook):
    from semfilter.fixtures import fixture_text

    assert load_grammar(fixture_text("grammar")) == phonebook


def test_fixture_round_trip(phonebook):
    assert load_grammar(dump_grammar(phonebook)) == phonebook


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_round_trip(seed):
    g = random_grammar(random.Random(seed))
    assert load_grammar(dump_grammar(g)) == g
