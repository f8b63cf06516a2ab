"""Island parsing of token sequences into weighted semantic chunks."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Mapping, Sequence

from .grammar import ANY, CATEGORY, EMPTY, LITERAL, LITERAL_WEIGHT, MARKER, WILDCARD_WEIGHT, Grammar, GrammarRule
from .validation import check_positive_int, check_tokens

DEFAULT_MAX_GAP = 2


@dataclass(frozen=True, order=True)
class Capture:
    span: tuple[int, int]
    text: str


@dataclass(frozen=True)
class Terminal:
    """A matched pre-terminal: marker, literal, wildcard or empty constituent."""

    kind: str
    label: str
    span: tuple[int, int]
    weight: float


@dataclass(frozen=True)
class Chunk:
    category: str
    span: tuple[int, int]
    weight: float
    children: tuple = ()
    captures: tuple[tuple[str, Capture | None], ...] = ()

    @property
    def width(self) -> int:
        return self.span[1] - self.span[0]

    @property
    def anchors(self) -> tuple[tuple[int, int], ...]:
        """Spans of the marker and literal tokens this chunk was built on."""
        out = []
        for child in self.children:
            if isinstance(child, Chunk):
                out.extend(child.anchors)
            elif child.kind in (MARKER, LITERAL):
                out.append(child.span)
        return tuple(out)

    def capture(self, slot: str) -> Capture | None:
        return dict(self.captures).get(slot)

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "span": list(self.span),
            "weight": self.weight,
            "captures": {s: (c.text if c else None) for s, c in self.captures},
        }


def rank_key(chunk: Chunk):
    return (-chunk.weight, chunk.span[0], -chunk.width, captures_key(chunk.captures))


def captures_key(captures) -> tuple:
    return tuple((slot, 0) if cap is None else (slot, 1, cap.text, cap.span) for slot, cap in captures)


@dataclass(frozen=True)
class ChunkSet:
    """Chunks of the grammar's start categories, each group in rank order."""

    chunks: Mapping[str, tuple[Chunk, ...]]
    n_tokens: int

    def __iter__(self) -> Iterator[Chunk]:
        for group in self.chunks.values():
            yield from group

    def __len__(self):
        return sum(len(g) for g in self.chunks.values())


# (end, weight, child, captures) for spans; (weight, child, captures) for zero width
def _item_options(grammar, item, words, table):
    n = len(words)
    by_start: dict[int, list] = {}
    zero: list = []

    def own(span):
        if not item.slot:
            return ()
        return ((item.slot, Capture(span, " ".join(words[span[0]:span[1]]))),)

    if item.kind in (MARKER, LITERAL):
        if item.kind == MARKER:
            marker = grammar.markers[item.ref]
            phrase, weight, label = marker.phrase, marker.weight, marker.name
        else:
            phrase, weight, label = item.phrase, LITERAL_WEIGHT, " ".join(item.phrase)
        size = len(phrase)
        for s in range(n - size + 1):
            if tuple(words[s:s + size]) == phrase:
                span = (s, s + size)
                by_start.setdefault(s, []).append((s + size, weight, Terminal(item.kind, label, span, weight), own(span)))
    elif item.kind == ANY:
        for s in range(n):
            for size in range(item.lo, item.hi + 1):
                if s + size > n:
                    break
                span = (s, s + size)
                term = Terminal(ANY, f"any({item.lo},{item.hi})", span, WILDCARD_WEIGHT)
                by_start.setdefault(s, []).append((s + size, WILDCARD_WEIGHT, term, own(span)))
    elif item.kind == EMPTY:
        caps = ((item.slot, None),) if item.slot else ()
        zero.append((item.weight, Terminal(EMPTY, "empty", (0, 0), item.weight), caps))
    elif item.kind == CATEGORY:
        for chunk in table[item.ref]:
            if chunk.width == 0:
                caps = ((item.slot, None),) if item.slot else ()
                zero.append((chunk.weight, chunk, caps + chunk.captures))
            else:
                caps = own(chunk.span) + chunk.captures
                by_start.setdefault(chunk.span[0], []).append((chunk.span[1], chunk.weight, chunk, caps))
    else:  # pragma: no cover - grammar loader rejects other kinds
        raise ValueError(f"unknown item kind {item.kind}")
    return by_start, zero


def _derive(grammar: Grammar, rule: GrammarRule, words, table, max_gap) -> Iterator[Chunk]:
    n = len(words)
    options = [_item_options(grammar, item, words, table) for item in rule.body]
    size = len(rule.body)

    def extend(idx, first, cursor, weight, children, caps):
        if idx == size:
            yield _finish(rule.category, first, cursor, weight, children, caps)
            return
        by_start, zero = options[idx]
        for w, child, icaps in zero:
            yield from extend(idx + 1, first, cursor, min(weight, w), children + ((None, child),), caps + icaps)
        starts = range(n) if cursor is None else range(cursor, min(cursor + max_gap, n - 1) + 1)
        for s in starts:
            for end, w, child, icaps in by_start.get(s, ()):
                yield from extend(
                    idx + 1, s if first is None else first, end, min(weight, w), children + ((s, child),), caps + icaps
                )

    yield from extend(0, None, None, 1.0, (), ())


def _finish(category, first, cursor, weight, children, caps) -> Chunk:
    span = (first, cursor) if first is not None else (0, 0)
    placed = []
    pos = span[0]
    for start, child in children:
        if start is None:
            # zero-width constituents sit right after the preceding island
            if child.span != (pos, pos):
                child = replace(child, span=(pos, pos))
        else:
            pos = child.span[1]
        placed.append(child)
    return Chunk(category, span, weight, tuple(placed), tuple(sorted(caps, key=lambda c: c[0])))


def parse_islands(grammar: Grammar, tokens: str | Sequence[str], max_gap: int = DEFAULT_MAX_GAP) -> ChunkSet:
    """Find every chunk of every start category anywhere in ``tokens``.

    Consecutive islands in a rule body may be separated by at most
    ``max_gap`` skipped tokens; skipping costs nothing. Zero-width
    constituents (empty fallbacks and chunks built only from them) take no
    position and do not count towards gaps. A category's all-empty fallback
    rules fire only when none of its other rules produced a chunk. Among
    derivations with the same span and captures, the heaviest is kept.
    """
    words = check_tokens(tokens)
    check_positive_int(max_gap, "max_gap", allow_zero=True)
    table: dict[str, list[Chunk]] = {}
    for cat in grammar.topological_order():
        found: dict = {}
        rules = grammar.rules[cat]
        for group in ([r for r in rules if not r.is_fallback], [r for r in rules if r.is_fallback]):
            for rule in group:
                for chunk in _derive(grammar, rule, words, table, max_gap):
                    key = (chunk.span, chunk.captures)
                    best = found.get(key)
                    if best is None or chunk.weight > best.weight:
                        found[key] = chunk
            if found:
                break
        table[cat] = sorted(found.values(), key=rank_key)
    return ChunkSet({cat: tuple(table[cat]) for cat in grammar.start}, len(words))


def k_best_chunks(chunk_set: ChunkSet, category: str, k: int) -> list[Chunk]:
    """Top ``k`` chunks of ``category`` by weight, then start, length and captures."""
    check_positive_int(k, "k")
    return sorted(chunk_set.chunks.get(category, ()), key=rank_key)[:k]
