"""scikit-learn compatible wrappers around the pipeline stages.

Nothing here is trained: ``fit`` loads and validates the grammar and
theories, so the stages can be cloned, grid-searched over their parameters
and chained with :class:`sklearn.pipeline.Pipeline`::

    X = [["le", "numero", "de", "dupont", "a", "lausanne"]]
    pipe = make_pipeline(IslandChunker(), FrameHypothesizer(), QueryCompleter())
    pipe.fit(X).predict(X)
"""

from __future__ import annotations

from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .chunker import DEFAULT_MAX_GAP, ChunkSet, parse_islands
from .completion import ContextFacts, filter_hypotheses
from .fixtures import fixture_path
from .frames import FrameSchema, assemble_hypotheses, k_best_frames, parse_schema
from .grammar import Grammar, load_grammar
from .lattice import WordLattice
from .logic import Theory, parse_theory
from .logic.solve import DEFAULT_DEPTH_LIMIT
from .pipeline import PipelineConfig, load_resources, run_pipeline
from .validation import check_positive_int, check_token_batch


def _load(value, default: str, loader):
    """Accept a loaded object, a path, or ``None`` for the shipped fixture."""
    if value is None:
        value = fixture_path(default)
    if isinstance(value, (str, Path)):
        return loader(Path(value).read_text(encoding="utf-8"))
    return value


def _theory(name):
    return lambda text: parse_theory(text, name=name)


class IslandChunker(TransformerMixin, BaseEstimator):
    """Token sequences to :class:`ChunkSet` objects."""

    def __init__(self, grammar=None, max_gap=DEFAULT_MAX_GAP):
        self.grammar = grammar
        self.max_gap = max_gap

    def fit(self, X=None, y=None):
        check_positive_int(self.max_gap, "max_gap", allow_zero=True)
        self.grammar_: Grammar = _load(self.grammar, "grammar", load_grammar)
        return self

    def transform(self, X):
        check_is_fitted(self, "grammar_")
        return [parse_islands(self.grammar_, tokens, self.max_gap) for tokens in check_token_batch(X)]


class FrameHypothesizer(TransformerMixin, BaseEstimator):
    """Chunk sets to their ``k_frames`` best frame hypotheses."""

    def __init__(self, schema=None, k_frames=5):
        self.schema = schema
        self.k_frames = k_frames

    def fit(self, X=None, y=None):
        check_positive_int(self.k_frames, "k_frames")
        self.schema_: FrameSchema = _load(self.schema, "schema", parse_schema)
        return self

    def transform(self, X):
        check_is_fitted(self, "schema_")
        out = []
        for chunks in X:
            if not isinstance(chunks, ChunkSet):
                raise ValueError(f"expected ChunkSet, got {type(chunks).__name__}")
            out.append(k_best_frames(assemble_hypotheses(chunks, self.schema_), self.k_frames))
        return out


class QueryCompleter(BaseEstimator):
    """Ranked hypothesis lists to one coherence-checked, completed query each."""

    def __init__(self, rules=None, defaults=None, kb=None, constraints=None, context=None, schema=None,
                 depth_limit=DEFAULT_DEPTH_LIMIT):
        self.rules = rules
        self.defaults = defaults
        self.kb = kb
        self.constraints = constraints
        self.context = context
        self.schema = schema
        self.depth_limit = depth_limit

    def fit(self, X=None, y=None):
        check_positive_int(self.depth_limit, "depth_limit")
        self.rules_: Theory = _load(self.rules, "rules", _theory("rules"))
        self.defaults_: Theory = _load(self.defaults, "defaults", _theory("query_defaults"))
        self.kb_: Theory = _load(self.kb, "kb", _theory("kb"))
        self.constraints_: Theory = _load(self.constraints, "constraints", _theory("constraints"))
        self.schema_: FrameSchema = _load(self.schema, "schema", parse_schema)
        if self.context is None:
            self.context_ = ContextFacts()
        elif isinstance(self.context, ContextFacts):
            self.context_ = self.context
        else:
            self.context_ = ContextFacts.from_text(Path(self.context).read_text(encoding="utf-8"))
        return self

    def predict(self, X):
        check_is_fitted(self, "rules_")
        return [
            filter_hypotheses(
                ranked, self.rules_, self.defaults_, self.kb_, self.constraints_, self.context_, self.schema_,
                self.depth_limit,
            )
            for ranked in X
        ]


class QueryFrameParser(BaseEstimator):
    """The whole pipeline as one estimator over lattices or token sequences.

    ``predict`` returns completed queries; ``score`` is exact-frame accuracy
    against gold ``{slot: value}`` maps.
    """

    def __init__(self, grammar=None, schema=None, rules=None, defaults=None, kb=None, constraints=None,
                 context=None, k_paths=3, k_frames=5, max_gap=DEFAULT_MAX_GAP, depth_limit=DEFAULT_DEPTH_LIMIT):
        self.grammar = grammar
        self.schema = schema
        self.rules = rules
        self.defaults = defaults
        self.kb = kb
        self.constraints = constraints
        self.context = context
        self.k_paths = k_paths
        self.k_frames = k_frames
        self.max_gap = max_gap
        self.depth_limit = depth_limit

    def fit(self, X=None, y=None):
        self.config_ = PipelineConfig(
            grammar=self.grammar, schema=self.schema, rules=self.rules, defaults=self.defaults, kb=self.kb,
            constraints=self.constraints, context=self.context, k_paths=self.k_paths, k_frames=self.k_frames,
            max_gap=self.max_gap, depth_limit=self.depth_limit,
        )
        self.resources_ = load_resources(self.config_)
        return self

    def _sources(self, X):
        if isinstance(X, (str, WordLattice)):
            raise ValueError("expected a sequence of utterances")
        lattices = [x for x in X if isinstance(x, WordLattice)]
        if len(lattices) == len(X):
            return list(X)
        if lattices:
            raise ValueError("mixed lattices and token sequences")
        return check_token_batch(X)

    def predict(self, X):
        check_is_fitted(self, "resources_")
        return [run_pipeline(self.config_, src, self.resources_).best for src in self._sources(X)]

    def score(self, X, y):
        predicted = self.predict(X)
        if len(predicted) != len(y):
            raise ValueError("X and y have different lengths")
        if not predicted:
            return float("nan")
        return sum(q.values() == dict(gold) for q, gold in zip(predicted, y)) / len(predicted)
