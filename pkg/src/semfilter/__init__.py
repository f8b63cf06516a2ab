"""Robust query-frame extraction from noisy recognizer output.

A weighted chunk grammar proposes ranked frame hypotheses; a small Horn-clause
engine over composable theories completes missing slots by default reasoning
and rejects incoherent requests.
"""

from .chunker import Chunk, ChunkSet, k_best_chunks, parse_islands
from .completion import (
    CompletedQuery,
    ContextFacts,
    Verdict,
    check_coherence,
    complete,
    filter_hypotheses,
    frame_to_theory,
)
from .frames import FrameHypothesis, FrameSchema, SlotDef, assemble_hypotheses, default_schema, k_best_frames
from .grammar import Grammar, GrammarError, defined_categories, dump_grammar, load_grammar
from .lattice import LatticeFormatError, NBestEntry, Token, WordLattice, n_best_paths, parse_lattice
from .pipeline import PipelineConfig, eval_corpus, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "Chunk",
    "ChunkSet",
    "CompletedQuery",
    "ContextFacts",
    "FrameHypothesis",
    "FrameSchema",
    "Grammar",
    "GrammarError",
    "LatticeFormatError",
    "NBestEntry",
    "PipelineConfig",
    "SlotDef",
    "Token",
    "Verdict",
    "WordLattice",
    "assemble_hypotheses",
    "check_coherence",
    "complete",
    "default_schema",
    "defined_categories",
    "dump_grammar",
    "eval_corpus",
    "filter_hypotheses",
    "frame_to_theory",
    "k_best_chunks",
    "k_best_frames",
    "load_grammar",
    "n_best_paths",
    "parse_islands",
    "parse_lattice",
    "run_pipeline",
]
