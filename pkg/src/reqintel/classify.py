"""Bag-of-words multinomial Naive Bayes over the three feedback labels.

Labels are fixed: problem_report, inquiry, irrelevant ("feature request"
counts as inquiry). Model snapshots are immutable; retraining publishes a
new version. Tokens never seen in training are ignored at prediction time,
and class priors get add-one smoothing so a class absent from the corpus
keeps nonzero mass.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import BadDistribution, BadRecord, EmptyCorpus, UnknownLabel, UntrainedModel

PROBLEM_REPORT = "problem_report"
INQUIRY = "inquiry"
IRRELEVANT = "irrelevant"

# Tie-break order for argmax: first entry wins exact ties.
LABELS = (PROBLEM_REPORT, INQUIRY, IRRELEVANT)

DEFAULT_ALPHA = 1.0
DEFAULT_TAU = 0.2

_URL_RE = re.compile(r"[a-z][a-z0-9+.\-]*://\S*")
_MENTION_RE = re.compile(r"@\w+")
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase, strip URLs and @-mentions, split on non-alphanumerics.

    Tokens shorter than 2 characters are dropped; order and duplicates
    are preserved.
    """
    lowered = text.lower()
    lowered = _URL_RE.sub(" ", lowered)
    lowered = _MENTION_RE.sub(" ", lowered)
    return [t for t in _TOKEN_RE.findall(lowered) if len(t) >= 2]


@dataclass
class FeatureVector:
    counts: dict[str, int] = field(default_factory=dict)
    total_tokens: int = 0


def extract_features(tokens: list[str]) -> FeatureVector:
    return FeatureVector(counts=dict(Counter(tokens)), total_tokens=len(tokens))


@dataclass(frozen=True)
class ModelSnapshot:
    """Immutable trained classifier state.

    vocabulary is kept sorted so identical corpora produce identical
    snapshots regardless of document order.
    """

    version: int
    vocabulary: tuple[str, ...]
    class_doc_counts: dict[str, int]
    class_token_counts: dict[str, dict[str, int]]
    class_token_totals: dict[str, int]
    alpha: float

    @property
    def corpus_size(self) -> int:
        return sum(self.class_doc_counts.values())

    def prior(self, label: str) -> float:
        # Add-one over the three classes keeps unseen classes alive.
        return (self.class_doc_counts[label] + 1) / (self.corpus_size + len(LABELS))


@dataclass
class Classification:
    item_id: str
    label: str
    probabilities: dict[str, float]
    margin: float
    uncertain: bool
    model_version: int


def train(
    corpus: list[tuple[FeatureVector, str]],
    alpha: float = DEFAULT_ALPHA,
    version: int = 1,
) -> ModelSnapshot:
    """Count a labeled corpus into a new snapshot.

    Raises EmptyCorpus on an empty corpus. alpha is the Laplace smoothing
    constant applied at prediction time.
    """
    if not corpus:
        raise EmptyCorpus("cannot train on an empty corpus")
    if alpha <= 0:
        raise ValueError("alpha must be > 0")

    doc_counts = {label: 0 for label in LABELS}
    token_counts: dict[str, dict[str, int]] = {label: {} for label in LABELS}
    vocabulary: set[str] = set()

    for features, label in corpus:
        if label not in doc_counts:
            raise ValueError(f"unknown label in corpus: {label!r}")
        doc_counts[label] += 1
        per_class = token_counts[label]
        for token, count in features.counts.items():
            per_class[token] = per_class.get(token, 0) + count
            vocabulary.add(token)

    return ModelSnapshot(
        version=version,
        vocabulary=tuple(sorted(vocabulary)),
        class_doc_counts=doc_counts,
        class_token_counts=token_counts,
        class_token_totals={label: sum(token_counts[label].values()) for label in LABELS},
        alpha=alpha,
    )


def predict(
    model: ModelSnapshot,
    features: FeatureVector,
    tau: float = DEFAULT_TAU,
    item_id: str = "",
) -> Classification:
    """Laplace-smoothed posterior over the three labels, computed in log space.

    Tokens outside the training vocabulary are ignored. Probabilities are
    normalized with the max-log-score subtracted, so long documents cannot
    underflow to NaN.
    """
    if model.version <= 0 or model.corpus_size == 0:
        raise UntrainedModel("no trained model available")

    vocab = set(model.vocabulary)
    vocab_size = len(model.vocabulary)
    log_scores = []
    for label in LABELS:
        score = math.log(model.prior(label))
        denom = model.class_token_totals[label] + model.alpha * vocab_size
        per_class = model.class_token_counts[label]
        for token, count in features.counts.items():
            if token not in vocab:
                continue
            score += count * math.log((per_class.get(token, 0) + model.alpha) / denom)
        log_scores.append(score)

    peak = max(log_scores)
    exps = [math.exp(s - peak) for s in log_scores]
    total = sum(exps)
    probabilities = {label: e / total for label, e in zip(LABELS, exps)}

    best = max(LABELS, key=lambda l: probabilities[l])
    # max() keeps the first of equal values, which is the tie-break order.
    margin, uncertain = uncertainty(probabilities, tau)
    return Classification(
        item_id=item_id,
        label=best,
        probabilities=probabilities,
        margin=margin,
        uncertain=uncertain,
        model_version=model.version,
    )


def load_labeled_corpus(path: str | Path) -> list[tuple[FeatureVector, str]]:
    """Read a hand-labeled NDJSON corpus: record lines plus a `label` key."""
    corpus = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise BadRecord(f"{path}:{lineno}: {exc}") from exc
        label = data.get("label")
        if label not in LABELS:
            raise UnknownLabel(f"{path}:{lineno}: unknown label {label!r}")
        corpus.append((extract_features(tokenize(data.get("text", ""))), label))
    return corpus


def uncertainty(probabilities: dict[str, float], tau: float) -> tuple[float, bool]:
    """Margin (top1 - top2) and whether it falls below the gate threshold."""
    total = sum(probabilities.values())
    if abs(total - 1.0) > 1e-6:
        raise BadDistribution(f"probabilities sum to {total}, not 1")
    ranked = sorted(probabilities.values(), reverse=True)
    margin = ranked[0] - ranked[1]
    return margin, margin < tau
