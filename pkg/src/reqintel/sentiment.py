"""Lexicon-based sentiment scoring with a small negation window.

A hit contributes its valence, sign-flipped when a negator appears within
the 3 tokens immediately before it (nearest negator only, applied once).
Scores are normalized by hit count, not document length, and items without
any lexicon hit stay out of averages entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

DEFAULT_NEGATORS = frozenset({"not", "no", "never", "cannot"})
NEGATION_WINDOW = 3
NEUTRAL_BAND = 0.05

NEGATIVE = "negative"
NEUTRAL = "neutral"
POSITIVE = "positive"


@dataclass
class SentimentLexicon:
    entries: dict[str, float]
    negators: frozenset[str] = DEFAULT_NEGATORS

    def __post_init__(self):
        overlap = set(self.entries) & set(self.negators)
        if overlap:
            raise ValueError(f"tokens are both entries and negators: {sorted(overlap)}")
        for token, valence in self.entries.items():
            if valence == 0 or not -1.0 <= valence <= 1.0:
                raise ValueError(f"valence for {token!r} must be nonzero in [-1, 1]")


@dataclass
class SentimentScore:
    value: float
    polarity: str
    hits: int


def _polarity(value: float) -> str:
    if value < -NEUTRAL_BAND:
        return NEGATIVE
    if value > NEUTRAL_BAND:
        return POSITIVE
    return NEUTRAL


def score_sentiment(tokens: list[str], lexicon: SentimentLexicon) -> SentimentScore:
    total = 0.0
    hits = 0
    for i, token in enumerate(tokens):
        valence = lexicon.entries.get(token)
        if valence is None:
            continue
        hits += 1
        negated = any(
            tokens[j] in lexicon.negators
            for j in range(i - 1, max(i - 1 - NEGATION_WINDOW, -1), -1)
        )
        total += -valence if negated else valence
    if hits == 0:
        return SentimentScore(value=0.0, polarity=NEUTRAL, hits=0)
    value = max(-1.0, min(1.0, total / hits))
    return SentimentScore(value=value, polarity=_polarity(value), hits=hits)


def average_sentiment(scores: list[SentimentScore]) -> float | None:
    """Mean value over scores with at least one hit; None when there are none."""
    scored = [s.value for s in scores if s.hits > 0]
    if not scored:
        return None
    return sum(scored) / len(scored)


def load_lexicon(path: str | Path) -> SentimentLexicon:
    """Parse a tab-separated lexicon file.

    Lines are ``token<TAB>valence`` or ``token<TAB>NEG``; blank lines and
    ``#`` comments are skipped. Files without NEG lines fall back to the
    default negator set.
    """
    entries: dict[str, float] = {}
    negators: set[str] = set()
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'token<TAB>valence'")
        token, value = parts[0].strip(), parts[1].strip()
        if value == "NEG":
            negators.add(token)
        else:
            entries[token] = float(value)
    return SentimentLexicon(
        entries=entries,
        negators=frozenset(negators) if negators else DEFAULT_NEGATORS,
    )
