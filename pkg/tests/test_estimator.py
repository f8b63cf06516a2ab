from __future__ import annotations

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from semfilter.chunker import ChunkSet
from semfilter.estimator import FrameHypothesizer, IslandChunker, QueryCompleter, QueryFrameParser
from semfilter.fixtures import fixture_path
from semfilter.lattice import parse_lattice

X = [["le", "numero", "de", "dupont", "a", "lausanne"], "le numero de martin qui habite a geneve"]


def test_params_and_clone():
    est = IslandChunker(max_gap=1)
    assert est.get_params() == {"grammar": None, "max_gap": 1}
    copy = clone(est)
    assert copy.get_params() == est.get_params() and copy is not est
    parser = QueryFrameParser(k_paths=2)
    assert parser.set_params(k_frames=3).get_params()["k_frames"] == 3


def test_transformers_chain():
    chunks = IslandChunker().fit_transform(X)
    assert all(isinstance(c, ChunkSet) for c in chunks)
    frames = FrameHypothesizer(k_frames=2).fit_transform(chunks)
    assert [len(f) for f in frames] == [2, 2]


def test_sklearn_pipeline():
    pipe = make_pipeline(IslandChunker(), FrameHypothesizer(), QueryCompleter())
    out = pipe.fit(X).predict(X)
    assert [q.values()["name"] for q in out] == ["dupont", "martin"]


def test_not_fitted():
    with pytest.raises(NotFittedError):
        IslandChunker().transform(X)
    with pytest.raises(NotFittedError):
        QueryFrameParser().predict(X)


def test_input_validation():
    chunker = IslandChunker().fit()
    with pytest.raises(ValueError):
        chunker.transform("a single string")
    with pytest.raises(ValueError):
        IslandChunker(max_gap=-1).fit()
    with pytest.raises(ValueError):
        FrameHypothesizer().fit().transform([["not", "chunks"]])


def test_whole_pipeline_estimator():
    lat = parse_lattice(fixture_path("lattice").read_text())
    parser = QueryFrameParser().fit()
    (best,) = parser.predict([lat])
    assert best.values()["name"] == "dupont"
    gold = [{"identification": "person", "name": "dupont", "locality": "lausanne", "loc_type": "city",
             "phone_type": "standard"}]
    assert parser.score([lat], gold) == 1.0
    with pytest.raises(ValueError):
        parser.predict([lat, "le numero"])


def test_completer_context_path(tmp_path):
    ctx = tmp_path / "ctx.pl"
    ctx.write_text("caller_prefix(p27).\n")
    pipe = make_pipeline(IslandChunker(), FrameHypothesizer(), QueryCompleter(context=str(ctx)))
    (q,) = pipe.fit([["x"]]).predict([["le", "numero", "de", "favre"]])
    assert q.values()["locality"] == "sion" and q.verdict.accepted
