import struct
from datetime import datetime, timedelta, timezone

import pytest

from reqintel.active_learning import LabelEvent
from reqintel.analytics import FocusFilter
from reqintel.classify import Classification, ModelSnapshot
from reqintel.errors import BadPage, DuplicateLabel, NotFound
from reqintel.ingestion import FeedbackItem
from reqintel.sentiment import SentimentScore
from reqintel.storage import Store

T0 = datetime(2019, 3, 1, tzinfo=timezone.utc)


def make_item(i, source="app_store", created=None):
    created = created or (T0 + timedelta(hours=i))
    return FeedbackItem(
        id=f"i{i}",
        source=source,
        text=f"feedback item number {i}",
        language="en",
        created_at=created,
        rating=None,
        author_ref=None,
        ingested_at=created + timedelta(hours=1),
    )


def make_classification(item_key, label="problem_report", margin=0.5, version=1):
    probs = {"problem_report": 0.0, "inquiry": 0.0, "irrelevant": 0.0}
    probs[label] = 0.5 + margin / 2
    rest = 1.0 - probs[label]
    for other in probs:
        if other != label:
            probs[other] = rest / 2
    return Classification(
        item_id=item_key,
        label=label,
        probabilities=probs,
        margin=margin,
        uncertain=margin < 0.2,
        model_version=version,
    )


def make_event(item_key, assigned="inquiry", prior="problem_report"):
    return LabelEvent(
        item_id=item_key,
        assigned_label=assigned,
        action="agree" if assigned == prior else "relabel",
        prior_label=prior,
        actor="tester",
        decided_at=T0 + timedelta(days=1),
        model_version_at_decision=1,
    )


def make_model(version=1):
    return ModelSnapshot(
        version=version,
        vocabulary=("alpha", "beta"),
        class_doc_counts={"problem_report": 1, "inquiry": 1, "irrelevant": 0},
        class_token_counts={
            "problem_report": {"alpha": 2},
            "inquiry": {"beta": 1},
            "irrelevant": {},
        },
        class_token_totals={"problem_report": 2, "inquiry": 1, "irrelevant": 0},
        alpha=1.0,
    )


@pytest.fixture
def store(tmp_path):
    s = Store(tmp_path / "data")
    yield s
    s.close()


class TestUpsert:
    def test_skips_existing_keys(self, store):
        a, b, c = make_item(1), make_item(2), make_item(3)
        assert store.upsert_items([a, b]) == 2
        assert store.upsert_items([a, c]) == 1
        assert {r.item.id for r in store.snapshot_records()} == {"i1", "i2", "i3"}

    def test_empty_batch(self, store):
        assert store.upsert_items([]) == 0

    def test_same_id_different_source_both_kept(self, store):
        assert store.upsert_items([make_item(1, "app_store"), make_item(1, "microblog")]) == 2


class TestPuts:
    def test_classification_requires_item(self, store):
        with pytest.raises(NotFound):
            store.put_classification(make_classification("app_store:i1"))

    def test_latest_classification_wins(self, store):
        item = make_item(1)
        store.upsert_items([item])
        store.put_classification(make_classification(item.item_key, version=1))
        store.put_classification(make_classification(item.item_key, label="inquiry", version=2))
        assert store.get_record(item.item_key).classification.label == "inquiry"
        # history keeps the superseded verdict
        assert store.classification_at(item.item_key, 1).label == "problem_report"

    def test_sentiment_requires_item(self, store):
        with pytest.raises(NotFound):
            store.put_sentiment("app_store:nope", SentimentScore(0.0, "neutral", 0))

    def test_second_label_event_rejected(self, store):
        item = make_item(1)
        store.upsert_items([item])
        store.put_label_event(make_event(item.item_key))
        with pytest.raises(DuplicateLabel):
            store.put_label_event(make_event(item.item_key, assigned="irrelevant"))

    def test_label_event_requires_item(self, store):
        with pytest.raises(NotFound):
            store.put_label_event(make_event("app_store:missing"))

    def test_current_model_is_highest_version(self, store):
        store.put_model(make_model(1))
        store.put_model(make_model(3))
        store.put_model(make_model(2))
        assert store.read_current_model().version == 3


class TestPendingLabelEvents:
    def test_events_after_model_are_pending(self, store):
        items = [make_item(i) for i in range(3)]
        store.upsert_items(items)
        store.put_model(make_model(1))
        store.put_label_event(make_event(items[0].item_key))
        store.put_label_event(make_event(items[1].item_key))
        pending = store.label_events_since_last_model()
        assert [e.item_id for e in pending] == [items[0].item_key, items[1].item_key]
        store.put_model(make_model(2))
        assert store.label_events_since_last_model() == []


class TestQuery:
    def test_pagination_covers_all_without_overlap(self, store):
        store.upsert_items([make_item(i) for i in range(5)])
        seen = []
        offset = 0
        while True:
            page, total = store.query(FocusFilter(), offset=offset, limit=2)
            assert total == 5
            if not page:
                break
            seen.extend(r.item.item_key for r in page)
            offset += 2
        assert len(seen) == len(set(seen)) == 5

    def test_empty_result(self, store):
        page, total = store.query(FocusFilter(keyword="nothing matches this"), limit=10)
        assert page == [] and total == 0

    def test_limit_cap(self, store):
        with pytest.raises(BadPage):
            store.query(FocusFilter(), limit=501)
        with pytest.raises(BadPage):
            store.query(FocusFilter(), limit=0)
        with pytest.raises(BadPage):
            store.query(FocusFilter(), offset=-1)

    def test_labeled_item_effective_label(self, store):
        item = make_item(1)
        store.upsert_items([item])
        store.put_classification(make_classification(item.item_key, label="problem_report"))
        store.put_label_event(make_event(item.item_key, assigned="inquiry"))
        record, = store.query(FocusFilter(), limit=10)[0]
        assert record.effective_label == "inquiry"

    def test_ordering_newest_first(self, store):
        store.upsert_items([make_item(i) for i in range(4)])
        page, _ = store.query(FocusFilter(), limit=10)
        created = [r.item.created_at for r in page]
        assert created == sorted(created, reverse=True)


class TestReplay:
    def populate(self, store):
        items = [make_item(i) for i in range(4)]
        store.upsert_items(items)
        store.put_model(make_model(1))
        for item in items:
            store.put_classification(make_classification(item.item_key, margin=0.1))
            store.put_sentiment(item.item_key, SentimentScore(0.5, "positive", 2))
        store.put_label_event(make_event(items[0].item_key))
        return items

    def test_replay_reproduces_state(self, tmp_path):
        store = Store(tmp_path / "data")
        self.populate(store)
        expected = store.dump_state()
        store.close()

        reopened = Store(tmp_path / "data")
        assert reopened.dump_state() == expected
        reopened.close()

    def test_replay_after_truncation_at_record_boundary(self, tmp_path):
        store = Store(tmp_path / "data")
        self.populate(store)
        store.close()
        log_path = tmp_path / "data" / "store.log"
        raw = log_path.read_bytes()

        # walk the record boundaries and replay each prefix
        boundaries = []
        offset = 0
        while offset < len(raw):
            (length,) = struct.unpack_from(">I", raw, offset)
            offset += 4 + length
            boundaries.append(offset)
        assert boundaries[-1] == len(raw)

        for record_count, boundary in enumerate(boundaries, 1):
            log_path.write_bytes(raw[:boundary])
            replayed = Store(tmp_path / "data")
            assert replayed._seq == record_count
            replayed.close()

    def test_partial_tail_record_is_dropped(self, tmp_path):
        store = Store(tmp_path / "data")
        items = self.populate(store)
        store.close()
        log_path = tmp_path / "data" / "store.log"
        raw = log_path.read_bytes()

        # state at the penultimate record boundary
        offset = 0
        boundaries = [0]
        while offset < len(raw):
            (length,) = struct.unpack_from(">I", raw, offset)
            offset += 4 + length
            boundaries.append(offset)
        log_path.write_bytes(raw[: boundaries[-2]])
        clean = Store(tmp_path / "data")
        clean_state = clean.dump_state()
        clean.close()

        # now truncate mid-record: same state as the clean prefix
        log_path.write_bytes(raw[: boundaries[-2] + 3])
        ragged = Store(tmp_path / "data")
        assert ragged.dump_state() == clean_state
        ragged.close()

    def test_writes_after_reopen_continue_sequence(self, tmp_path):
        store = Store(tmp_path / "data")
        self.populate(store)
        seq_before = store._seq
        store.close()

        reopened = Store(tmp_path / "data")
        reopened.upsert_items([make_item(99)])
        assert reopened._seq == seq_before + 1
        reopened.close()
