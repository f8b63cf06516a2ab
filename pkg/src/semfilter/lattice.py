"""Word lattices: the recognizer-output data model and n-best path extraction."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .validation import check_weight


class LatticeFormatError(ValueError):
    """Raised when lattice text is malformed or the graph is invalid."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class Token:
    surface: str
    position: int = 0

    def __post_init__(self):
        if not self.surface or any(c.isspace() for c in self.surface):
            raise ValueError(f"invalid token surface {self.surface!r}")


@dataclass(frozen=True)
class Arc:
    src: int
    dst: int
    surface: str
    weight: float


@dataclass(frozen=True)
class NBestEntry:
    tokens: tuple[Token, ...]
    weight: float

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    @property
    def text(self) -> str:
        return " ".join(self.words)


@dataclass(frozen=True)
class WordLattice:
    """A DAG of weighted word arcs whose node ids are a topological numbering.

    Construction validates the graph: every arc goes from a lower to a higher
    node id, weights lie in [0, 1], and every node is on some start-to-end
    path.
    """

    node_count: int
    arcs: tuple[Arc, ...]
    start: int
    end: int

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))
        _validate(self.node_count, self.arcs, self.start, self.end)

    def outgoing(self, node: int) -> list[Arc]:
        return [a for a in self.arcs if a.src == node]

    @classmethod
    def from_tokens(cls, words: Iterable[str]) -> "WordLattice":
        """Linear lattice, every arc weighted 1.0.

        No words gives a single-node lattice whose only path is empty.
        """
        words = [w.lower() for w in words]
        arcs = tuple(Arc(i, i + 1, w, 1.0) for i, w in enumerate(words))
        return cls(len(words) + 1, arcs, 0, len(words))


def _validate(node_count, arcs, start, end, lines: Sequence[int] | None = None) -> None:
    if node_count < 1:
        raise LatticeFormatError("node_count must be positive")
    for nid in (start, end):
        if not 0 <= nid < node_count:
            raise LatticeFormatError(f"node {nid} out of range")
    for i, arc in enumerate(arcs):
        line = lines[i] if lines else None
        for nid in (arc.src, arc.dst):
            if not 0 <= nid < node_count:
                raise LatticeFormatError(f"node {nid} out of range", line)
        if arc.src == arc.dst:
            raise LatticeFormatError(f"cycle detected at node {arc.src}", line)
        if arc.src > arc.dst:
            raise LatticeFormatError(f"non-monotone arc {arc.src}->{arc.dst}", line)
        try:
            check_weight(arc.weight)
        except ValueError as exc:
            raise LatticeFormatError(str(exc), line) from None
        if not arc.surface or any(c.isspace() for c in arc.surface):
            raise LatticeFormatError(f"invalid surface {arc.surface!r}", line)

    forward = {start}
    for arc in sorted(arcs, key=lambda a: a.src):
        if arc.src in forward:
            forward.add(arc.dst)
    backward = {end}
    for arc in sorted(arcs, key=lambda a: -a.dst):
        if arc.dst in backward:
            backward.add(arc.src)
    for node in range(node_count):
        if node not in forward or node not in backward:
            raise LatticeFormatError(f"unreachable node {node}")


def parse_lattice(text: str) -> WordLattice:
    """Parse the line-oriented lattice format.

    ::

        lattice <node_count> <start_id> <end_id>
        arc <from> <to> <surface> <weight>
    """
    header = None
    arcs: list[Arc] = []
    arc_lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            if fields[0] == "lattice" and len(fields) == 4:
                if header is not None:
                    raise LatticeFormatError("duplicate lattice declaration", lineno)
                header = tuple(int(f) for f in fields[1:])
            elif fields[0] == "arc" and len(fields) == 5:
                if header is None:
                    raise LatticeFormatError("arc before lattice declaration", lineno)
                arcs.append(Arc(int(fields[1]), int(fields[2]), fields[3].lower(), float(fields[4])))
                arc_lines.append(lineno)
            else:
                raise LatticeFormatError(f"syntax error: {line!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, LatticeFormatError):
                raise
            raise LatticeFormatError(f"syntax error: {line!r}", lineno) from None
    if header is None:
        raise LatticeFormatError("missing lattice declaration")
    node_count, start, end = header
    _validate(node_count, arcs, start, end, arc_lines)
    return WordLattice(node_count, tuple(arcs), start, end)


def format_lattice(lattice: WordLattice) -> str:
    lines = [f"lattice {lattice.node_count} {lattice.start} {lattice.end}"]
    lines += [f"arc {a.src} {a.dst} {a.surface} {a.weight!r}" for a in lattice.arcs]
    return "\n".join(lines) + "\n"


def n_best_paths(lattice: WordLattice, k: int | None) -> list[NBestEntry]:
    """Return the ``k`` best start-to-end paths (``None`` means all).

    Paths are ordered by product weight, descending, then by the
    space-joined token string. Best-first search over partial paths is exact
    here because extending a path can only lower its weight and only
    lengthen its string.
    """
    if k is not None and k < 1:
        raise ValueError("k must be >= 1")
    out: dict[int, list[Arc]] = {}
    for arc in lattice.arcs:
        out.setdefault(arc.src, []).append(arc)

    counter = 0
    heap = [(-1.0, "", counter, lattice.start, ())]
    results: list[NBestEntry] = []
    while heap and (k is None or len(results) < k):
        negw, text, _, node, words = heapq.heappop(heap)
        if node == lattice.end:
            tokens = tuple(Token(w, i) for i, w in enumerate(words))
            results.append(NBestEntry(tokens, -negw))
            continue
        for arc in out.get(node, ()):
            counter += 1
            joined = arc.surface if not text else f"{text} {arc.surface}"
            heapq.heappush(heap, (negw * arc.weight, joined, counter, arc.dst, words + (arc.surface,)))
    return results


def as_lattice(source: WordLattice | str | Sequence[str]) -> WordLattice:
    """Coerce a lattice, a whitespace-separated string, or a word list."""
    if isinstance(source, WordLattice):
        return source
    if isinstance(source, str):
        source = source.split()
    return WordLattice.from_tokens(source)
