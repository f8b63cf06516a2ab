"""Shipped sample data and the fixture self-check.

Layout under ``semfilter/data``::

    phonebook.grammar    sample chunk grammar (illustrative, not corpus-derived)
    schema.txt           frame schema
    rules.pl             slot inference rules
    query_defaults.pl    default slot values
    kb.pl                prefix/gis world knowledge
    constraints.pl       violation/1 coherence constraints
    context_p21.pl       caller context for the completion scenario
    lattices/            example recognizer lattices
    corpus/              utterances paired with gold frames
    expected/            stored outputs checked by verify_fixtures()
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

DATA_DIR = Path(__file__).resolve().parent / "data"

FIXTURE_FILES = {
    "grammar": "phonebook.grammar",
    "schema": "schema.txt",
    "rules": "rules.pl",
    "defaults": "query_defaults.pl",
    "kb": "kb.pl",
    "constraints": "constraints.pl",
    "context": "context_p21.pl",
    "lattice": "lattices/dupont_lausanne.lat",
    "corpus": "corpus",
}


def fixture_path(name: str) -> Path:
    return DATA_DIR / FIXTURE_FILES[name]


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def expected(name: str):
    return json.loads((DATA_DIR / "expected" / name).read_text(encoding="utf-8"))


@dataclass
class FixtureReport:
    passed: list[str] = field(default_factory=list)
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def check(self, label: str, got, want) -> None:
        if got == want:
            self.passed.append(label)
        else:
            self.mismatches.append(f"{label}: expected {want!r}, got {got!r}")


def verify_fixtures(overrides: Mapping[str, str] | None = None) -> FixtureReport:
    """Load every fixture and replay the stored scenarios.

    ``overrides`` maps fixture names to replacement text, which is how
    callers check that a broken fixture is caught.
    """
    from .completion import ContextFacts, complete
    from .frames import FrameHypothesis, parse_schema
    from .grammar import load_grammar
    from .lattice import parse_lattice
    from .logic import parse_theory
    from .pipeline import PipelineConfig, Resources, run_pipeline

    overrides = dict(overrides or {})
    report = FixtureReport()

    def text(name):
        return overrides[name] if name in overrides else fixture_text(name)

    loaders = {
        "grammar": load_grammar,
        "schema": parse_schema,
        "rules": lambda t: parse_theory(t, "rules"),
        "defaults": lambda t: parse_theory(t, "query_defaults"),
        "kb": lambda t: parse_theory(t, "kb"),
        "constraints": lambda t: parse_theory(t, "constraints"),
        "context": ContextFacts.from_text,
        "lattice": parse_lattice,
    }
    loaded = {}
    for name, loader in loaders.items():
        try:
            loaded[name] = loader(text(name))
            report.passed.append(f"{FIXTURE_FILES[name]}: loads")
        except (ValueError, OSError) as exc:
            report.mismatches.append(f"{FIXTURE_FILES[name]}: {exc}")
    if not report.ok:
        return report

    scenario = expected("completion_scenario.json")
    for name in ("rules", "defaults"):
        report.check(f"{FIXTURE_FILES[name]}: clauses", [str(c) for c in loaded[name]], scenario[f"{name}_clauses"])

    for case in ("with_context", "without_context"):
        want = scenario[case]
        context = loaded["context"] if case == "with_context" else ContextFacts()
        done = complete(FrameHypothesis(), loaded["rules"], loaded["defaults"], loaded["kb"], context, loaded["schema"])
        got = done.values()
        for slot in sorted(set(want["slots"]) | set(got)):
            report.check(f"{FIXTURE_FILES['defaults']}: {case} {slot}", got.get(slot), want["slots"].get(slot))
        report.check(f"{FIXTURE_FILES['defaults']}: {case} missing", list(done.verdict.missing), want["missing"])

    res = Resources(
        loaded["grammar"], loaded["schema"], loaded["rules"], loaded["defaults"], loaded["kb"],
        loaded["constraints"], ContextFacts(),
    )
    run = run_pipeline(PipelineConfig(), loaded["lattice"], res).to_dict()
    want = expected("run_dupont_lausanne.json")
    for key in sorted(set(want) | set(run)):
        report.check(f"{FIXTURE_FILES['lattice']}: run {key}", run.get(key), want.get(key))
    return report


if __name__ == "__main__":  # pragma: no cover
    result = verify_fixtures()
    for line in result.passed:
        print("ok  ", line)
    for line in result.mismatches:
        print("FAIL", line)
    raise SystemExit(0 if result.ok else 1)
