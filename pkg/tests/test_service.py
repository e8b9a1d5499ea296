import json
import threading

import pytest

from reqintel.config import Config
from reqintel.service import FeedbackService
from tests.conftest import OOV_TEXT


@pytest.fixture
def service(tmp_path):
    svc = FeedbackService(Config(storage_dir=str(tmp_path / "data"), batch_size=2))
    yield svc
    svc.close()


def line(i, text):
    return json.dumps(
        {"id": f"s{i}", "text": text, "created_at": "2019-03-05T10:00:00Z"}
    )


class TestDataDirLayout:
    def test_seeded_with_lexicon_and_bootstrap(self, tmp_path, service):
        data = tmp_path / "data"
        assert (data / "lexicon.tsv").exists()
        assert (data / "bootstrap.ndjson").exists()
        service.train_bootstrap()
        assert (data / "store.log").exists()

    def test_swapped_lexicon_wins_on_restart(self, tmp_path, service):
        data = tmp_path / "data"
        service.close()
        (data / "lexicon.tsv").write_text("fine\t0.5\n", encoding="utf-8")
        reopened = FeedbackService(Config(storage_dir=str(data)))
        try:
            assert reopened.lexicon.entries == {"fine": 0.5}
        finally:
            reopened.close()


class TestLabelBatching:
    def test_batch_size_triggers_retrain(self, service):
        service.train_bootstrap()
        lines = [line(i, OOV_TEXT) for i in range(3)]
        service.ingest_lines(lines, "custom")

        queue = service.review_queue(limit=10)
        assert len(queue) >= 2
        first, second = queue[0], queue[1]

        _, version_after_first = service.label_item(
            first.item_id, first.classification.label, "rev"
        )
        assert version_after_first is None  # batch of 2 not filled yet

        _, version_after_second = service.label_item(
            second.item_id, second.allowed_relabels[0], "rev"
        )
        assert version_after_second == 2  # second label fills the batch

        remaining = {c.item_id for c in service.review_queue(limit=10)}
        assert first.item_id not in remaining
        assert second.item_id not in remaining


class TestWriterSerialization:
    def test_concurrent_ingest_of_same_batch(self, service):
        service.train_bootstrap()
        lines = [line(i, "identical batch from two writers") for i in range(20)]
        results = []

        def ingest():
            results.append(service.ingest_lines(lines, "custom"))

        threads = [threading.Thread(target=ingest) for _ in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sum(r["stored"] for r in results) == 20
