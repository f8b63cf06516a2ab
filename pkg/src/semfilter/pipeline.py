"""End-to-end pipeline: lattice, n-best paths, chunks, frames, completed query."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .chunker import DEFAULT_MAX_GAP, ChunkSet, parse_islands
from .completion import ACCEPTED, INCOMPLETE, REJECTED, CompletedQuery, ContextFacts, filter_hypotheses
from .fixtures import fixture_path
from .frames import FrameSchema, assemble_hypotheses, default_schema, k_best_frames, parse_schema
from .grammar import Grammar, load_grammar
from .lattice import NBestEntry, WordLattice, as_lattice, n_best_paths, parse_lattice
from .logic import Theory, parse_theory
from .logic.solve import DEFAULT_DEPTH_LIMIT
from .validation import check_positive_int

logger = logging.getLogger(__name__)

VERDICT_RANK = {ACCEPTED: 0, INCOMPLETE: 1, REJECTED: 2}


@dataclass
class PipelineConfig:
    """File locations and search limits. ``None`` paths use the shipped fixtures."""

    grammar: str | Path | None = None
    schema: str | Path | None = None
    rules: str | Path | None = None
    defaults: str | Path | None = None
    kb: str | Path | None = None
    constraints: str | Path | None = None
    context: str | Path | None = None
    context_facts: Sequence[str] = ()
    k_paths: int = 3
    k_frames: int = 5
    max_gap: int = DEFAULT_MAX_GAP
    depth_limit: int = DEFAULT_DEPTH_LIMIT
    trace: bool = False

    def __post_init__(self):
        for name in ("k_paths", "k_frames", "depth_limit"):
            check_positive_int(getattr(self, name), name)
        check_positive_int(self.max_gap, "max_gap", allow_zero=True)

    def resolve(self, name: str) -> Path | None:
        value = getattr(self, name)
        if value is not None:
            return Path(value)
        if name == "context":
            return None
        return fixture_path(name)


@dataclass(frozen=True)
class Resources:
    grammar: Grammar
    schema: FrameSchema
    rules: Theory
    defaults: Theory
    kb: Theory
    constraints: Theory
    context: ContextFacts


def _read(path: Path) -> str:
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    return path.read_text(encoding="utf-8")


def load_resources(config: PipelineConfig) -> Resources:
    """Read every configured file; raises ``FileNotFoundError`` or a format error."""
    paths = {name: config.resolve(name) for name in ("grammar", "schema", "rules", "defaults", "kb", "constraints")}
    texts = {name: _read(p) for name, p in paths.items()}
    context_path = config.resolve("context")
    facts = ContextFacts.from_text(_read(context_path), str(context_path)).facts if context_path else ()
    extra = ContextFacts.from_text("\n".join(f if f.rstrip().endswith(".") else f + "." for f in config.context_facts))
    return Resources(
        grammar=load_grammar(texts["grammar"]),
        schema=parse_schema(texts["schema"]) if texts["schema"].strip() else default_schema(),
        rules=parse_theory(texts["rules"], name="rules"),
        defaults=parse_theory(texts["defaults"], name="query_defaults"),
        kb=parse_theory(texts["kb"], name="kb"),
        constraints=parse_theory(texts["constraints"], name="constraints"),
        context=ContextFacts(facts + extra.facts, str(context_path or "")),
    )


@dataclass
class PathResult:
    rank: int
    path: NBestEntry
    chunks: ChunkSet
    frames: list
    completion: CompletedQuery


@dataclass
class PipelineReport:
    best: CompletedQuery
    best_path: NBestEntry
    paths: list[PathResult] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = self.best.to_dict()
        out["source_path_weight"] = self.best_path.weight
        out["path"] = self.best_path.text
        return out

    def trace_records(self) -> list[dict]:
        records = []
        for pr in self.paths:
            records.append({"trace": "path", "rank": pr.rank, "tokens": pr.path.text, "weight": pr.path.weight})
            for chunk in pr.chunks:
                records.append({"trace": "chunk", "path": pr.rank, **chunk.to_dict()})
            for j, frame in enumerate(pr.frames):
                records.append({"trace": "frame", "path": pr.rank, "rank": j, **frame.to_dict()})
            records.append({"trace": "completion", "path": pr.rank, **pr.completion.to_dict()})
        return records

    def to_jsonl(self, trace: bool = False) -> str:
        lines = [dumps(r) for r in self.trace_records()] if trace else []
        lines.append(dumps(self.to_dict()))
        return "\n".join(lines) + "\n"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def read_input(lattice: str | Path | None = None, tokens: str | None = None) -> WordLattice:
    if lattice is not None:
        return parse_lattice(_read(Path(lattice)))
    if tokens is None:
        raise ValueError("either a lattice file or a token string is required")
    return as_lattice(tokens.lower())


def hypotheses_for(res: Resources, words, config: PipelineConfig):
    chunks = parse_islands(res.grammar, words, config.max_gap)
    frames = k_best_frames(assemble_hypotheses(chunks, res.schema), config.k_frames)
    return chunks, frames


def process_path(res: Resources, path: NBestEntry, rank: int, config: PipelineConfig) -> PathResult:
    chunks, frames = hypotheses_for(res, path.words, config)
    best = filter_hypotheses(
        frames, res.rules, res.defaults, res.kb, res.constraints, res.context, res.schema, config.depth_limit
    )
    return PathResult(rank, path, chunks, frames, best)


def selection_key(pr: PathResult):
    q = pr.completion
    return (VERDICT_RANK[q.verdict.status], -q.overall_weight, -pr.path.weight, pr.rank)


def run_pipeline(
    config: PipelineConfig,
    source: WordLattice | str | Sequence[str],
    resources: Resources | None = None,
) -> PipelineReport:
    """Process the ``k_paths`` best recognizer paths and keep the best query.

    Queries are compared by verdict (accepted, then incomplete, then
    rejected), then by weight, then by the weight of their source path.
    """
    res = resources or load_resources(config)
    lattice = as_lattice(source)
    results = [process_path(res, p, i, config) for i, p in enumerate(n_best_paths(lattice, config.k_paths))]
    chosen = min(results, key=selection_key)
    return PipelineReport(chosen.completion, chosen.path, results)


# ---- corpus evaluation -------------------------------------------------

INPUT_SUFFIXES = (".lat", ".tok")
GOLD_SUFFIX = ".gold.json"


def _gold_values(raw: dict) -> dict[str, str]:
    slots = raw.get("slots", raw)
    return {s: (v["value"] if isinstance(v, dict) else v) for s, v in slots.items()}


def _ratio(num: int, den: int):
    return num / den if den else None


def score_frames(pairs: Sequence[tuple[dict, dict]]) -> dict:
    """Slot precision/recall and exact-frame accuracy over (predicted, gold) value maps.

    Undefined ratios (zero denominators) are reported as ``None``.
    """
    per_slot: dict[str, dict[str, int]] = {}
    tp = fp = fn = exact = 0
    for predicted, gold in pairs:
        exact += predicted == gold
        for slot in sorted(set(predicted) | set(gold)):
            counts = per_slot.setdefault(slot, {"tp": 0, "fp": 0, "fn": 0})
            p, g = predicted.get(slot), gold.get(slot)
            if p is not None and p == g:
                counts["tp"] += 1
                tp += 1
                continue
            if p is not None:
                counts["fp"] += 1
                fp += 1
            if g is not None:
                counts["fn"] += 1
                fn += 1
    return {
        "frames": len(pairs),
        "frame_accuracy": _ratio(exact, len(pairs)),
        "slot_precision": _ratio(tp, tp + fp),
        "slot_recall": _ratio(tp, tp + fn),
        "per_slot": {
            s: {**c, "precision": _ratio(c["tp"], c["tp"] + c["fp"]), "recall": _ratio(c["tp"], c["tp"] + c["fn"])}
            for s, c in sorted(per_slot.items())
        },
    }


def eval_corpus(config: PipelineConfig, corpus_dir: str | Path, resources: Resources | None = None) -> dict:
    """Score the pipeline on ``<id>.lat``/``<id>.tok`` inputs against ``<id>.gold.json``.

    Files without a partner are listed under ``unpaired`` and skipped.
    Utterances are processed in filename order.
    """
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(f"no such corpus directory: {corpus_dir}")
    res = resources or load_resources(config)
    inputs, golds = {}, {}
    for f in sorted(corpus_dir.iterdir()):
        if f.name.endswith(GOLD_SUFFIX):
            golds[f.name[: -len(GOLD_SUFFIX)]] = f
        elif f.suffix in INPUT_SUFFIXES:
            if f.stem in inputs:
                logger.warning("duplicate input for %s: %s", f.stem, f.name)
                continue
            inputs[f.stem] = f
    unpaired = sorted([inputs[k].name for k in inputs if k not in golds] + [golds[k].name for k in golds if k not in inputs])
    for name in unpaired:
        logger.warning("unpaired corpus file skipped: %s", name)

    pairs, items = [], []
    for key in sorted(set(inputs) & set(golds)):
        f = inputs[key]
        source = read_input(lattice=f) if f.suffix == ".lat" else read_input(tokens=_read(f))
        report = run_pipeline(config, source, res)
        predicted = report.best.values()
        gold = _gold_values(json.loads(_read(golds[key])))
        pairs.append((predicted, gold))
        items.append({"id": key, "exact": predicted == gold, "verdict": report.best.verdict.to_dict()})
    summary = score_frames(pairs)
    summary["items"] = items
    summary["unpaired"] = unpaired
    return summary
