"""Frame schemas and ranked frame hypotheses built from chunk captures."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping

from .chunker import ChunkSet
from .validation import check_identifier, check_positive_int

logger = logging.getLogger(__name__)

SLOT_CANDIDATE_CAP = 5

PARSED = "parsed"
INFERRED = "inferred"
DEFAULT = "default"


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class SlotDef:
    name: str
    mandatory: bool = True
    kind: str = "symbol"  # "symbol" values become single atoms, "text" keeps spaces


@dataclass(frozen=True)
class FrameSchema:
    slots: tuple[SlotDef, ...]

    def __post_init__(self):
        names = [s.name for s in self.slots]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate slot names")
        if not any(s.mandatory for s in self.slots):
            raise SchemaError("schema needs at least one mandatory slot")
        for s in self.slots:
            if s.kind not in ("symbol", "text"):
                raise SchemaError(f"unknown value kind {s.kind!r} for slot {s.name}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.slots)

    @property
    def mandatory(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.slots if s.mandatory)

    def __contains__(self, name):
        return name in self.names

    def slot(self, name: str) -> SlotDef:
        for s in self.slots:
            if s.name == name:
                return s
        raise KeyError(name)

    def normalize(self, name: str, text: str) -> str:
        words = text.lower().split()
        return ("_" if self.slot(name).kind == "symbol" else " ").join(words)


def default_schema() -> FrameSchema:
    return FrameSchema(
        (
            SlotDef("identification", True, "symbol"),
            SlotDef("name", False, "text"),
            SlotDef("locality", True, "symbol"),
            SlotDef("loc_type", True, "symbol"),
            SlotDef("phone_type", True, "symbol"),
        )
    )


def parse_schema(text: str) -> FrameSchema:
    """Read ``slot <name> <mandatory|optional> <symbol|text>`` lines."""
    slots = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 4 or fields[0] != "slot" or fields[2] not in ("mandatory", "optional"):
            raise SchemaError(f"line {lineno}: expected 'slot <name> <mandatory|optional> <symbol|text>'")
        try:
            check_identifier(fields[1], "slot name")
        except ValueError as exc:
            raise SchemaError(f"line {lineno}: {exc}") from None
        slots.append(SlotDef(fields[1], fields[2] == "mandatory", fields[3]))
    return FrameSchema(tuple(slots))


def format_schema(schema: FrameSchema) -> str:
    return "".join(
        f"slot {s.name} {'mandatory' if s.mandatory else 'optional'} {s.kind}\n" for s in schema.slots
    )


@dataclass(frozen=True)
class SlotFill:
    value: str
    weight: float | None
    provenance: str = PARSED


@dataclass(frozen=True)
class FrameHypothesis:
    """One interpretation: slot fills plus their min-combined confidence."""

    fills: tuple[tuple[str, SlotFill], ...] = ()

    @property
    def overall_weight(self) -> float:
        weights = [f.weight for _, f in self.fills]
        return min(weights) if weights else 0.0

    @property
    def filled(self) -> dict[str, SlotFill]:
        return dict(self.fills)

    def value(self, slot: str) -> str | None:
        fill = self.filled.get(slot)
        return fill.value if fill else None

    def to_dict(self) -> dict:
        return {
            "slots": {s: {"value": f.value, "weight": f.weight, "provenance": f.provenance} for s, f in self.fills},
            "overall_weight": self.overall_weight,
        }

    @classmethod
    def from_values(cls, values: Mapping[str, tuple[str, float]], schema: FrameSchema | None = None):
        """Build a hypothesis from ``{slot: (value, weight)}``, ordered by the schema."""
        order = schema.names if schema else sorted(values)
        return cls(tuple((s, SlotFill(*values[s])) for s in order if s in values))


@dataclass(frozen=True)
class _Candidate:
    slot: str
    value: str
    weight: float
    capture_span: tuple[int, int]
    chunk_span: tuple[int, int]
    anchors: tuple[tuple[int, int], ...] = ()


def _overlap(a, b) -> bool:
    return a[0] < b[1] and b[0] < a[1]


def _consistent(chosen: list[_Candidate]) -> bool:
    for a, b in itertools.combinations(chosen, 2):
        if _overlap(a.capture_span, b.capture_span):
            return False
        # a value may not be read off tokens that anchor another fill
        if any(_overlap(a.capture_span, x) for x in b.anchors if x != a.capture_span):
            return False
        if any(_overlap(b.capture_span, x) for x in a.anchors if x != b.capture_span):
            return False
    return True


def hypothesis_key(h: FrameHypothesis, schema: FrameSchema):
    filled = h.filled
    values = tuple((0, filled[s].value) if s in filled else (1, "") for s in schema.names)
    weights = tuple(-filled[s].weight if s in filled else 1.0 for s in schema.names)
    return (-h.overall_weight, -len(filled), values, weights)


def slot_candidates(chunks: ChunkSet | Iterable, schema: FrameSchema, cap: int = SLOT_CANDIDATE_CAP):
    """The best ``cap`` distinct captures per schema slot.

    A capture overlapping the marker or literal tokens of any other chunk in
    the set is dropped.
    """
    chunks = list(chunks)
    anchors = {span for chunk in chunks for span in chunk.anchors}
    best: dict[str, dict] = {s: {} for s in schema.names}
    for chunk in chunks:
        foreign = anchors - set(chunk.anchors)
        for slot, capture in chunk.captures:
            if capture is None:
                continue
            if any(_overlap(capture.span, a) for a in foreign):
                # cue phrases found elsewhere separate slots; they are never values
                continue
            if slot not in schema:
                logger.warning("ignoring capture for unknown slot %s", slot)
                continue
            cand = _Candidate(
                slot, schema.normalize(slot, capture.text), chunk.weight, capture.span, chunk.span, chunk.anchors
            )
            key = (cand.value, cand.capture_span, cand.chunk_span)
            old = best[slot].get(key)
            if old is None or cand.weight > old.weight:
                best[slot][key] = cand
    return {
        slot: sorted(found.values(), key=lambda c: (-c.weight, c.value, c.capture_span, c.chunk_span))[:cap]
        for slot, found in best.items()
    }


def assemble_hypotheses(chunks: ChunkSet | Iterable, schema: FrameSchema | None = None) -> list[FrameHypothesis]:
    """Combine at most one capture per slot into ranked frame hypotheses.

    Fills in one hypothesis must be read off disjoint token spans, and no
    fill's value may overlap the marker or literal tokens another fill's
    chunk was anchored on. The all-empty hypothesis is always included.
    """
    schema = schema or default_schema()
    candidates = slot_candidates(chunks, schema)
    seen = set()
    hypotheses = []
    for combo in itertools.product(*[[None] + candidates[s] for s in schema.names]):
        chosen = [c for c in combo if c is not None]
        if not _consistent(chosen):
            continue
        h = FrameHypothesis(tuple((c.slot, SlotFill(c.value, c.weight)) for c in chosen))
        if h.fills not in seen:
            seen.add(h.fills)
            hypotheses.append(h)
    hypotheses.sort(key=lambda h: hypothesis_key(h, schema))
    return hypotheses


def k_best_frames(hypotheses: list[FrameHypothesis], k: int) -> list[FrameHypothesis]:
    check_positive_int(k, "k")
    return list(hypotheses[:k])
