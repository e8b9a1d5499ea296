"""Human-in-the-loop labeling of uncertain predictions.

Only items whose current prediction falls below the margin threshold may be
labeled (the uncertainty gate); one decision per item, ever. Accumulated
decisions feed incremental retraining that must match a full retrain over
the extended corpus exactly, and human labels become ground truth that the
model never overrides.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import TYPE_CHECKING

from . import analytics
from .classify import (
    LABELS,
    Classification,
    ModelSnapshot,
    extract_features,
    predict,
    tokenize,
)
from .errors import (
    AlreadyLabeled,
    EmptyUpdate,
    NotFound,
    NotUncertain,
    UnknownLabel,
    UntrainedModel,
)

if TYPE_CHECKING:
    from .storage import Store

AGREE = "agree"
RELABEL = "relabel"

DEFAULT_BATCH_SIZE = 10
DEFAULT_QUEUE_LIMIT = 50
EXCERPT_LENGTH = 200


@dataclass
class LabelEvent:
    item_id: str
    assigned_label: str
    action: str
    prior_label: str
    actor: str
    decided_at: datetime
    model_version_at_decision: int

    def __post_init__(self):
        if self.action == AGREE and self.assigned_label != self.prior_label:
            raise ValueError("agree events must keep the model's label")
        if self.action == RELABEL and self.assigned_label == self.prior_label:
            raise ValueError("relabel events must change the label")


@dataclass
class ReviewCandidate:
    item_id: str
    excerpt: str
    classification: Classification
    allowed_relabels: list[str]


def allowed_relabels(model_label: str) -> list[str]:
    """The two labels a reviewer may switch to, in fixed label order."""
    return [label for label in LABELS if label != model_label]


class LabelingService:
    """Review queue, gate enforcement, and retraining over a store."""

    def __init__(self, store: "Store", tau: float, queue_limit: int = DEFAULT_QUEUE_LIMIT):
        self.store = store
        self.tau = tau
        self.queue_limit = queue_limit

    def uncertain_queue(
        self,
        filter: analytics.FocusFilter | None = None,
        limit: int | None = None,
    ) -> list[ReviewCandidate]:
        """Unlabeled items the current model is uncertain about.

        Most uncertain first (ascending margin), ties by created_at then
        item id, capped at `limit`.
        """
        model = self.store.read_current_model()
        if model is None:
            raise UntrainedModel("train a model before requesting the review queue")
        limit = self.queue_limit if limit is None else limit

        records = analytics.apply_filter(
            self.store.snapshot_records(), filter or analytics.FocusFilter()
        )
        eligible = [
            r
            for r in records
            if r.classification is not None
            and r.classification.uncertain
            and r.classification.model_version == model.version
            and r.label_event is None
        ]
        eligible.sort(
            key=lambda r: (r.classification.margin, r.item.created_at, r.item.item_key)
        )
        return [
            ReviewCandidate(
                item_id=r.item.item_key,
                excerpt=r.item.text[:EXCERPT_LENGTH],
                classification=r.classification,
                allowed_relabels=allowed_relabels(r.classification.label),
            )
            for r in eligible[:limit]
        ]

    def apply_label(
        self,
        item_id: str,
        assigned_label: str,
        actor: str,
        now: datetime | None = None,
    ) -> LabelEvent:
        """Record one human decision on an uncertain item.

        The gate is hard: items whose current classification is certain are
        rejected with NotUncertain, including decisions that became stale
        because a retrain republished the item as certain.
        """
        if assigned_label not in LABELS:
            raise UnknownLabel(f"unknown label: {assigned_label!r}")
        record = self.store.get_record(item_id)
        if record is None:
            raise NotFound(item_id)
        if record.label_event is not None:
            raise AlreadyLabeled(f"item already labeled: {item_id}")
        classification = record.classification
        if classification is None or not classification.uncertain:
            raise NotUncertain(f"item is not uncertain under the current model: {item_id}")

        action = AGREE if assigned_label == classification.label else RELABEL
        event = LabelEvent(
            item_id=item_id,
            assigned_label=assigned_label,
            action=action,
            prior_label=classification.label,
            actor=actor,
            decided_at=(now or datetime.now(timezone.utc)).replace(microsecond=0),
            model_version_at_decision=classification.model_version,
        )
        self.store.put_label_event(event)
        return event

    def retrain(self, model: ModelSnapshot, new_events: list[LabelEvent]) -> ModelSnapshot:
        """Fold newly labeled items into the counts; version bumps by one.

        Purely incremental, but by construction equal to retraining from
        scratch on the extended corpus: token counts are additive and the
        vocabulary is kept sorted.
        """
        if not new_events:
            raise EmptyUpdate("no label events to retrain on")

        doc_counts = dict(model.class_doc_counts)
        token_counts = {label: dict(counts) for label, counts in model.class_token_counts.items()}
        vocabulary = set(model.vocabulary)

        for event in new_events:
            record = self.store.get_record(event.item_id)
            if record is None:
                raise NotFound(event.item_id)
            features = extract_features(tokenize(record.item.text))
            doc_counts[event.assigned_label] += 1
            per_class = token_counts[event.assigned_label]
            for token, count in features.counts.items():
                per_class[token] = per_class.get(token, 0) + count
                vocabulary.add(token)

        return ModelSnapshot(
            version=model.version + 1,
            vocabulary=tuple(sorted(vocabulary)),
            class_doc_counts=doc_counts,
            class_token_counts=token_counts,
            class_token_totals={label: sum(token_counts[label].values()) for label in LABELS},
            alpha=model.alpha,
        )

    def publish(self, snapshot: ModelSnapshot) -> None:
        """Store the snapshot and reclassify everything against it.

        Labeled items become ground truth (probability 1 on the assigned
        label, never uncertain); everything else is re-predicted.
        """
        self.store.put_model(snapshot)
        for record in self.store.snapshot_records():
            if record.label_event is not None:
                self.store.put_classification(
                    ground_truth_classification(
                        record.item.item_key,
                        record.label_event.assigned_label,
                        snapshot.version,
                    )
                )
            else:
                features = extract_features(tokenize(record.item.text))
                self.store.put_classification(
                    predict(snapshot, features, tau=self.tau, item_id=record.item.item_key)
                )

    def retrain_pending(self) -> ModelSnapshot | None:
        """Retrain on all label events not yet folded into a snapshot."""
        pending = self.store.label_events_since_last_model()
        if not pending:
            return None
        model = self.store.read_current_model()
        if model is None:
            raise UntrainedModel("cannot retrain without an initial model")
        snapshot = self.retrain(model, pending)
        self.publish(snapshot)
        return snapshot


def ground_truth_classification(item_id: str, label: str, model_version: int) -> Classification:
    return Classification(
        item_id=item_id,
        label=label,
        probabilities={l: 1.0 if l == label else 0.0 for l in LABELS},
        margin=1.0,
        uncertain=False,
        model_version=model_version,
    )
