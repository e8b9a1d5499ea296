"""Durable store: append-only log plus an in-memory index rebuilt on open.

Every commit appends one length-prefixed JSON record (4-byte big-endian
length, UTF-8 payload) with a strictly increasing write sequence number, so
replaying the log reproduces the exact index state. A single writer is
enforced with a lock; readers work off immutable committed values.
Classifications and sentiments are latest-wins per item with all previous
versions retained in the log (and a history map for audits); label events
are append-only with at most one per item.
"""

from __future__ import annotations

import json
import struct
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from . import analytics
from .active_learning import LabelEvent
from .classify import Classification, ModelSnapshot
from .errors import BadPage, DuplicateLabel, NotFound, StorageUnavailable
from .ingestion import FeedbackItem, parse_timestamp
from .sentiment import SentimentScore

LOG_NAME = "store.log"
MAX_PAGE_LIMIT = 500

_LEN = struct.Struct(">I")


@dataclass
class JoinedRecord:
    """One item joined with its current classification, sentiment, and label."""

    item: FeedbackItem
    classification: Classification | None = None
    sentiment: SentimentScore | None = None
    label_event: LabelEvent | None = None

    @property
    def effective_label(self) -> str | None:
        if self.label_event is not None:
            return self.label_event.assigned_label
        if self.classification is not None:
            return self.classification.label
        return None


def _iso(ts: datetime) -> str:
    return ts.isoformat()


def _item_to_dict(item: FeedbackItem) -> dict:
    return {
        "id": item.id,
        "source": item.source,
        "text": item.text,
        "language": item.language,
        "created_at": _iso(item.created_at),
        "rating": item.rating,
        "author_ref": item.author_ref,
        "ingested_at": _iso(item.ingested_at),
    }


def _item_from_dict(data: dict) -> FeedbackItem:
    return FeedbackItem(
        id=data["id"],
        source=data["source"],
        text=data["text"],
        language=data["language"],
        created_at=parse_timestamp(data["created_at"]),
        rating=data["rating"],
        author_ref=data["author_ref"],
        ingested_at=parse_timestamp(data["ingested_at"]),
    )


def _classification_to_dict(c: Classification) -> dict:
    return {
        "item_id": c.item_id,
        "label": c.label,
        "probabilities": c.probabilities,
        "margin": c.margin,
        "uncertain": c.uncertain,
        "model_version": c.model_version,
    }


def _classification_from_dict(data: dict) -> Classification:
    return Classification(**data)


def _sentiment_to_dict(item_id: str, s: SentimentScore) -> dict:
    return {"item_id": item_id, "value": s.value, "polarity": s.polarity, "hits": s.hits}


def _label_event_to_dict(e: LabelEvent) -> dict:
    return {
        "item_id": e.item_id,
        "assigned_label": e.assigned_label,
        "action": e.action,
        "prior_label": e.prior_label,
        "actor": e.actor,
        "decided_at": _iso(e.decided_at),
        "model_version_at_decision": e.model_version_at_decision,
    }


def _label_event_from_dict(data: dict) -> LabelEvent:
    data = dict(data)
    data["decided_at"] = parse_timestamp(data["decided_at"])
    return LabelEvent(**data)


def _model_to_dict(m: ModelSnapshot) -> dict:
    return {
        "version": m.version,
        "vocabulary": list(m.vocabulary),
        "class_doc_counts": m.class_doc_counts,
        "class_token_counts": m.class_token_counts,
        "class_token_totals": m.class_token_totals,
        "alpha": m.alpha,
    }


def _model_from_dict(data: dict) -> ModelSnapshot:
    return ModelSnapshot(
        version=data["version"],
        vocabulary=tuple(data["vocabulary"]),
        class_doc_counts=data["class_doc_counts"],
        class_token_counts=data["class_token_counts"],
        class_token_totals=data["class_token_totals"],
        alpha=data["alpha"],
    )


class Store:
    """Feedback items, classifications, sentiments, label events, models."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.log_path = self.directory / LOG_NAME
        self._lock = threading.Lock()
        self._seq = 0
        self._items: dict[str, FeedbackItem] = {}
        self._known: set[tuple[str, str]] = set()
        self._classifications: dict[str, Classification] = {}
        self._classification_history: dict[tuple[str, int], Classification] = {}
        self._sentiments: dict[str, SentimentScore] = {}
        self._label_events: dict[str, LabelEvent] = {}
        self._models: dict[int, ModelSnapshot] = {}
        self._last_model_seq = 0
        self._label_event_seqs: dict[str, int] = {}
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            if self.log_path.exists():
                self._replay()
            self._fh = open(self.log_path, "ab")
        except OSError as exc:
            raise StorageUnavailable(f"cannot open store at {self.directory}: {exc}") from exc

    def close(self) -> None:
        self._fh.close()

    # -- log machinery ----------------------------------------------------

    def _replay(self) -> None:
        raw = self.log_path.read_bytes()
        offset = 0
        while offset + _LEN.size <= len(raw):
            (length,) = _LEN.unpack_from(raw, offset)
            if offset + _LEN.size + length > len(raw):
                break  # truncated tail record from an interrupted write
            payload = raw[offset + _LEN.size : offset + _LEN.size + length]
            record = json.loads(payload.decode("utf-8"))
            self._apply(record["kind"], record["data"], record["seq"])
            self._seq = record["seq"]
            offset += _LEN.size + length

    def _commit(self, kind: str, data: dict) -> int:
        """Append one record to the log, then fold it into the index."""
        seq = self._seq + 1
        record = {"kind": kind, "seq": seq, "data": data}
        payload = json.dumps(record, sort_keys=True, ensure_ascii=False).encode("utf-8")
        try:
            self._fh.write(_LEN.pack(len(payload)) + payload)
            self._fh.flush()
        except OSError as exc:
            raise StorageUnavailable(f"write failed: {exc}") from exc
        self._seq = seq
        self._apply(kind, data, seq)
        return seq

    def _apply(self, kind: str, data: dict, seq: int) -> None:
        if kind == "item":
            item = _item_from_dict(data)
            self._items[item.item_key] = item
            self._known.add((item.source, item.id))
        elif kind == "classification":
            c = _classification_from_dict(data)
            self._classifications[c.item_id] = c
            self._classification_history[(c.item_id, c.model_version)] = c
        elif kind == "sentiment":
            data = dict(data)
            item_id = data.pop("item_id")
            self._sentiments[item_id] = SentimentScore(**data)
        elif kind == "label_event":
            e = _label_event_from_dict(data)
            self._label_events[e.item_id] = e
            self._label_event_seqs[e.item_id] = seq
        elif kind == "model":
            m = _model_from_dict(data)
            self._models[m.version] = m
            self._last_model_seq = seq
        else:
            raise StorageUnavailable(f"unknown record kind in log: {kind!r}")

    # -- writes ------------------------------------------------------------

    def upsert_items(self, items: list[FeedbackItem]) -> int:
        """Insert items with new (source, id); existing keys are skipped."""
        inserted = 0
        with self._lock:
            for item in items:
                if (item.source, item.id) in self._known:
                    continue
                self._commit("item", _item_to_dict(item))
                inserted += 1
        return inserted

    def put_classification(self, classification: Classification) -> None:
        with self._lock:
            if classification.item_id not in self._items:
                raise NotFound(classification.item_id)
            self._commit("classification", _classification_to_dict(classification))

    def put_sentiment(self, item_id: str, score: SentimentScore) -> None:
        with self._lock:
            if item_id not in self._items:
                raise NotFound(item_id)
            self._commit("sentiment", _sentiment_to_dict(item_id, score))

    def put_label_event(self, event: LabelEvent) -> None:
        with self._lock:
            if event.item_id not in self._items:
                raise NotFound(event.item_id)
            if event.item_id in self._label_events:
                raise DuplicateLabel(f"item already has a label event: {event.item_id}")
            self._commit("label_event", _label_event_to_dict(event))

    def put_model(self, model: ModelSnapshot) -> None:
        with self._lock:
            self._commit("model", _model_to_dict(model))

    # -- reads ---------------------------------------------------------------

    def known_keys(self) -> set[tuple[str, str]]:
        return set(self._known)

    def get_item(self, item_id: str) -> FeedbackItem | None:
        return self._items.get(item_id)

    def get_record(self, item_id: str) -> JoinedRecord | None:
        item = self._items.get(item_id)
        if item is None:
            return None
        return JoinedRecord(
            item=item,
            classification=self._classifications.get(item_id),
            sentiment=self._sentiments.get(item_id),
            label_event=self._label_events.get(item_id),
        )

    def snapshot_records(self) -> list[JoinedRecord]:
        """Joined view of every stored item, taken at call time."""
        with self._lock:
            keys = list(self._items)
        return [self.get_record(key) for key in keys]

    def read_current_model(self) -> ModelSnapshot | None:
        if not self._models:
            return None
        return self._models[max(self._models)]

    def get_model(self, version: int) -> ModelSnapshot | None:
        return self._models.get(version)

    def classification_at(self, item_id: str, model_version: int) -> Classification | None:
        """Historical verdict for an item under a specific model version."""
        return self._classification_history.get((item_id, model_version))

    def label_events(self) -> list[LabelEvent]:
        return [self._label_events[k] for k in sorted(self._label_events, key=self._label_event_seqs.get)]

    def label_events_since_last_model(self) -> list[LabelEvent]:
        """Label events not yet folded into a published snapshot, oldest first."""
        pending = [
            (seq, self._label_events[item_id])
            for item_id, seq in self._label_event_seqs.items()
            if seq > self._last_model_seq
        ]
        pending.sort(key=lambda pair: pair[0])
        return [event for _, event in pending]

    def query(
        self,
        filter: analytics.FocusFilter,
        offset: int = 0,
        limit: int = 50,
    ) -> tuple[list[JoinedRecord], int]:
        """One page of the filtered joined view plus the total match count."""
        if limit < 1 or limit > MAX_PAGE_LIMIT:
            raise BadPage(f"limit must be in 1..{MAX_PAGE_LIMIT}")
        if offset < 0:
            raise BadPage("offset must be >= 0")
        matched = analytics.apply_filter(self.snapshot_records(), filter)
        return matched[offset : offset + limit], len(matched)

    # -- audit helpers --------------------------------------------------------

    def dump_state(self) -> bytes:
        """Canonical serialization of the whole index, for replay comparison."""
        state = {
            "seq": self._seq,
            "items": {k: _item_to_dict(v) for k, v in sorted(self._items.items())},
            "classifications": {
                k: _classification_to_dict(v) for k, v in sorted(self._classifications.items())
            },
            "history": {
                f"{item_id}@{version}": _classification_to_dict(c)
                for (item_id, version), c in sorted(self._classification_history.items())
            },
            "sentiments": {
                k: _sentiment_to_dict(k, v) for k, v in sorted(self._sentiments.items())
            },
            "label_events": {
                k: _label_event_to_dict(v) for k, v in sorted(self._label_events.items())
            },
            "models": {str(v): _model_to_dict(m) for v, m in sorted(self._models.items())},
            "last_model_seq": self._last_model_seq,
        }
        return json.dumps(state, sort_keys=True, ensure_ascii=False).encode("utf-8")
