"""Weighted robust chunk grammars.

A grammar has three kinds of declaration::

    marker intro = "le numero de" @ 0.9 ;
    rule name_part -> intro any(1,3)>name ;
    rule name_part -> empty@0.0>name ;
    start name_part ;

Markers are cue phrases with a static confidence. Rule bodies mix category
and marker references, quoted literals, bounded wildcards and empty
fallbacks; a ``>slot`` suffix records the text an item matched as the value
of a frame slot. A chunk's weight is the minimum of its constituents'.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .validation import check_weight

WILDCARD_WEIGHT = 0.5
LITERAL_WEIGHT = 1.0
MAX_WILDCARD = 10

CATEGORY = "category"
MARKER = "marker"
LITERAL = "literal"
ANY = "any"
EMPTY = "empty"

_RESERVED = {"any", "empty", "marker", "rule", "start"}


class GrammarError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class MarkerDef:
    name: str
    phrase: tuple[str, ...]
    weight: float


@dataclass(frozen=True)
class RuleItem:
    """One element of a rule body.

    ``ref`` names the category or marker for reference items, ``phrase``
    holds the tokens of a literal, ``lo``/``hi`` bound a wildcard and
    ``weight`` is the static weight of an empty fallback.
    """

    kind: str
    ref: str | None = None
    phrase: tuple[str, ...] = ()
    lo: int = 0
    hi: int = 0
    weight: float | None = None
    slot: str | None = None

    def __str__(self):
        if self.kind in (CATEGORY, MARKER):
            text = self.ref
        elif self.kind == LITERAL:
            text = '"' + " ".join(self.phrase) + '"'
        elif self.kind == ANY:
            text = f"any({self.lo},{self.hi})"
        else:
            text = f"empty@{self.weight!r}"
        return text + (f">{self.slot}" if self.slot else "")


@dataclass(frozen=True)
class GrammarRule:
    category: str
    body: tuple[RuleItem, ...]

    @property
    def is_fallback(self) -> bool:
        """True when every item is an empty constituent."""
        return all(item.kind == EMPTY for item in self.body)

    def __str__(self):
        return f"rule {self.category} -> " + " ".join(str(i) for i in self.body) + " ;"


@dataclass(frozen=True)
class Grammar:
    markers: Mapping[str, MarkerDef] = field(default_factory=dict)
    rules: Mapping[str, tuple[GrammarRule, ...]] = field(default_factory=dict)
    start: tuple[str, ...] = ()

    def slots_of(self, category: str) -> frozenset[str]:
        """Every slot a chunk of ``category`` may capture, nested ones included."""
        found: set[str] = set()
        for rule in self.rules.get(category, ()):
            for item in rule.body:
                found |= _item_slots(self, item)
        return frozenset(found)

    def topological_order(self) -> list[str]:
        """Categories ordered so that every dependency precedes its users."""
        order: list[str] = []
        seen: set[str] = set()

        def visit(cat):
            if cat in seen:
                return
            seen.add(cat)
            for rule in self.rules[cat]:
                for item in rule.body:
                    if item.kind == CATEGORY:
                        visit(item.ref)
            order.append(cat)

        for cat in self.rules:
            visit(cat)
        return order


def _item_slots(grammar: Grammar, item: RuleItem) -> set[str]:
    slots = {item.slot} if item.slot else set()
    if item.kind == CATEGORY:
        slots |= grammar.slots_of(item.ref)
    return slots


def defined_categories(grammar: Grammar) -> set[str]:
    return {cat for cat, rules in grammar.rules.items() if rules}


_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)
      |(?P<string>"[^"\n]*")|(?P<arrow>->)|(?P<number>(?:\d*\.\d+|\d+)(?:[eE][-+]?\d+)?)
      |(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[=@;,()>])""",
    re.VERBOSE,
)


def _tokenize(text: str):
    pos, line = 0, 1
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise GrammarError(f"syntax error near {text[pos:pos + 10]!r}", line)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
        elif kind not in ("ws", "comment"):
            value = m.group()
            if kind in ("arrow", "punct"):
                kind = value
            out.append((kind, value, line))
        pos = m.end()
    out.append(("eof", "", line))
    return out


class _Reader:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def line(self):
        return self.toks[self.i][2]

    def peek(self):
        return self.toks[self.i][0]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            found = tok[1] or "end of input"
            raise GrammarError(f"syntax error: expected {kind!r}, found {found!r}", tok[2])
        self.i += 1
        return tok[1]

    def weight(self):
        line = self.line
        try:
            return check_weight(float(self.take("number")))
        except ValueError as exc:
            if isinstance(exc, GrammarError):
                raise
            raise GrammarError(str(exc), line) from None


def _phrase(raw: str, line: int) -> tuple[str, ...]:
    words = tuple(w.lower() for w in raw[1:-1].split())
    if not words:
        raise GrammarError("empty phrase", line)
    return words


def _count(raw: str, line: int) -> int:
    if not raw.isdigit():
        raise GrammarError(f"wildcard bound must be an integer, got {raw}", line)
    return int(raw)


def _read_item(rd: _Reader) -> RuleItem:
    line = rd.line
    kind = rd.peek()
    if kind == "string":
        item = RuleItem(LITERAL, phrase=_phrase(rd.take(), line))
    elif kind == "ident":
        name = rd.take()
        if name == "any":
            rd.take("(")
            lo = _count(rd.take("number"), line)
            rd.take(",")
            hi = _count(rd.take("number"), line)
            rd.take(")")
            if not 1 <= lo <= hi <= MAX_WILDCARD:
                raise GrammarError(f"wildcard bounds must satisfy 1 <= min <= max <= {MAX_WILDCARD}", line)
            item = RuleItem(ANY, lo=lo, hi=hi)
        elif name == "empty":
            weight = 0.0
            if rd.peek() == "@":
                rd.take("@")
                weight = rd.weight()
            item = RuleItem(EMPTY, weight=weight)
        else:
            item = RuleItem(CATEGORY, ref=name)
    else:
        raise GrammarError(f"syntax error: unexpected {rd.toks[rd.i][1] or 'end of input'!r}", line)
    if rd.peek() == ">":
        rd.take(">")
        item = RuleItem(item.kind, item.ref, item.phrase, item.lo, item.hi, item.weight, rd.take("ident"))
    return item


def load_grammar(text: str) -> Grammar:
    """Parse and validate grammar text.

    Raises ``GrammarError`` on syntax errors, undefined references,
    recursive categories, duplicate slots within a rule and weights outside
    [0, 1].
    """
    rd = _Reader(text)
    markers: dict[str, MarkerDef] = {}
    rules: dict[str, list[GrammarRule]] = {}
    rule_lines: list[tuple[GrammarRule, int]] = []
    start: list[str] = []
    start_line = None

    while rd.peek() != "eof":
        line = rd.line
        keyword = rd.take("ident")
        if keyword == "marker":
            name = rd.take("ident")
            rd.take("=")
            phrase = _phrase(rd.take("string"), line)
            rd.take("@")
            weight = rd.weight()
            rd.take(";")
            if name in markers:
                raise GrammarError(f"duplicate marker {name}", line)
            if name in _RESERVED:
                raise GrammarError(f"reserved name {name}", line)
            markers[name] = MarkerDef(name, phrase, weight)
        elif keyword == "rule":
            cat = rd.take("ident")
            if cat in _RESERVED:
                raise GrammarError(f"reserved name {cat}", line)
            rd.take("->")
            body = []
            while rd.peek() != ";":
                body.append(_read_item(rd))
            rd.take(";")
            if not body:
                raise GrammarError(f"empty body for rule {cat}", line)
            rule = GrammarRule(cat, tuple(body))
            rules.setdefault(cat, []).append(rule)
            rule_lines.append((rule, line))
        elif keyword == "start":
            start_line = line
            start.append(rd.take("ident"))
            while rd.peek() == ",":
                rd.take(",")
                start.append(rd.take("ident"))
            rd.take(";")
        else:
            raise GrammarError(f"syntax error: unknown declaration {keyword!r}", line)

    for name in markers:
        if name in rules:
            raise GrammarError(f"name {name} is both a marker and a category")

    resolved: dict[str, tuple[GrammarRule, ...]] = {}
    lines_of = {}
    for rule, line in rule_lines:
        body = []
        for item in rule.body:
            if item.kind == CATEGORY:
                if item.ref in markers:
                    item = RuleItem(MARKER, ref=item.ref, slot=item.slot)
                elif item.ref not in rules:
                    raise GrammarError(f"undefined category {item.ref}", line)
            body.append(item)
        new = GrammarRule(rule.category, tuple(body))
        resolved.setdefault(rule.category, ())
        resolved[rule.category] += (new,)
        lines_of[id(new)] = line

    _check_acyclic(resolved)
    if not start:
        referenced = {i.ref for rs in resolved.values() for r in rs for i in r.body if i.kind == CATEGORY}
        start = [c for c in resolved if c not in referenced]
    for cat in start:
        if cat not in resolved:
            raise GrammarError(f"undefined start category {cat}", start_line)
    grammar = Grammar(markers, resolved, tuple(dict.fromkeys(start)))

    for cat, rs in resolved.items():
        for rule in rs:
            seen: set[str] = set()
            for item in rule.body:
                slots = _item_slots(grammar, item)
                clash = seen & slots
                if clash:
                    raise GrammarError(
                        f"slot {sorted(clash)[0]} captured twice in rule for {cat}", lines_of[id(rule)]
                    )
                seen |= slots
    return grammar


def _check_acyclic(rules: Mapping[str, tuple[GrammarRule, ...]]) -> None:
    state: dict[str, int] = {}
    path: list[str] = []

    def visit(cat):
        state[cat] = 1
        path.append(cat)
        for rule in rules[cat]:
            for item in rule.body:
                if item.kind != CATEGORY:
                    continue
                dep = item.ref
                if state.get(dep) == 1:
                    cycle = path[path.index(dep):]
                    shown = " -> ".join(cycle + [dep]) if len(cycle) > 1 else dep
                    raise GrammarError(f"recursion cycle {shown}")
                if dep not in state:
                    visit(dep)
        path.pop()
        state[cat] = 2

    for cat in rules:
        if cat not in state:
            visit(cat)


def dump_grammar(grammar: Grammar) -> str:
    """Serialize ``grammar`` in the DSL; ``load_grammar`` reads it back unchanged."""
    lines = []
    for m in grammar.markers.values():
        lines.append(f'marker {m.name} = "{" ".join(m.phrase)}" @ {m.weight!r} ;')
    for rules in grammar.rules.values():
        lines.extend(str(r) for r in rules)
    if grammar.start:
        lines.append("start " + " , ".join(grammar.start) + " ;")
    return "\n".join(lines) + "\n"
