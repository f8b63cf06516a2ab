"""Input validation helpers shared by the modules and the estimator wrappers."""

from __future__ import annotations

import math
from numbers import Real
from typing import Iterable


def check_weight(value, name: str = "weight") -> float:
    """Return ``value`` as a float, raising ``ValueError`` unless it is in [0, 1]."""
    if isinstance(value, bool) or not isinstance(value, Real):
        raise ValueError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if math.isnan(value) or not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} {value!r} outside [0,1]")
    return value


def check_positive_int(value, name: str, allow_zero: bool = False) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        bound = "non-negative" if allow_zero else "positive"
        raise ValueError(f"{name} must be {bound}, got {value}")
    return value


def check_tokens(tokens: str | Iterable[str]) -> tuple[str, ...]:
    """Normalize a token sequence: lowercase, non-empty, whitespace-free words.

    A string is split on whitespace; any other iterable is taken element-wise
    (``Token`` objects are accepted through their ``surface``).
    """
    if isinstance(tokens, str):
        words = tokens.split()
    else:
        words = [getattr(t, "surface", t) for t in tokens]
    out = []
    for w in words:
        if not isinstance(w, str) or not w or any(c.isspace() for c in w):
            raise ValueError(f"invalid token {w!r}")
        out.append(w.lower())
    return tuple(out)


def check_token_batch(X) -> list[tuple[str, ...]]:
    """Validate a batch of utterances for the estimator API."""
    if isinstance(X, str):
        raise ValueError("expected a sequence of utterances, got a single string")
    return [check_tokens(x) for x in X]


def check_identifier(name: str, what: str = "identifier") -> str:
    if not name or not (name[0].isalpha() or name[0] == "_") or not all(
        c.isalnum() or c == "_" for c in name
    ):
        raise ValueError(f"invalid {what} {name!r}")
    return name
