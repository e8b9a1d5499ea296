"""Composition root: wires storage, classification, sentiment, labeling,
and the pipeline behind one object the API and CLI share.

Labeling and training funnel through a single lock (the single-writer
path); analytics reads work off a snapshot of the store taken per request.
"""

from __future__ import annotations

import logging
import shutil
import threading
from datetime import datetime, timezone
from pathlib import Path

from . import analytics
from .active_learning import LabelEvent, LabelingService, ReviewCandidate
from .classify import ModelSnapshot, load_labeled_corpus, train
from .config import Config
from .connectors import build_connector
from .orchestrator import Pipeline, PipelineReport, Scheduler
from .sentiment import load_lexicon
from .storage import Store

logger = logging.getLogger(__name__)


def _seed_data_file(data_dir: Path, name: str, source: str) -> Path:
    """Copy a data file into the data dir once; thereafter the copy rules.

    Keeps the documented layout (store.log, lexicon.tsv, bootstrap.ndjson in
    one directory) and lets deployments swap the files in place.
    """
    target = data_dir / name
    if not target.exists():
        shutil.copyfile(source, target)
    return target


class FeedbackService:
    def __init__(self, config: Config):
        self.config = config
        self.store = Store(config.storage_dir)
        data_dir = Path(config.storage_dir)
        self.lexicon_path = _seed_data_file(data_dir, "lexicon.tsv", config.lexicon_path)
        self.bootstrap_path = _seed_data_file(data_dir, "bootstrap.ndjson", config.bootstrap_path)
        self.lexicon = load_lexicon(self.lexicon_path)
        self.labeling = LabelingService(self.store, tau=config.tau, queue_limit=config.queue_limit)
        self.pipeline = Pipeline(
            self.store, self.labeling, self.lexicon, salt=config.salt, tau=config.tau
        )
        self.connectors = [build_connector(spec) for spec in config.connectors]
        self.last_report: PipelineReport | None = None
        self._writer_lock = threading.Lock()

    # -- training -----------------------------------------------------------

    def train_bootstrap(self, path: str | None = None) -> ModelSnapshot:
        """Train from the labeled bootstrap corpus and publish the snapshot."""
        corpus = load_labeled_corpus(path or self.bootstrap_path)
        with self._writer_lock:
            current = self.store.read_current_model()
            version = current.version + 1 if current else 1
            snapshot = train(corpus, alpha=self.config.alpha, version=version)
            self.labeling.publish(snapshot)
        logger.info("published model version %d (%d training docs)", version, len(corpus))
        return snapshot

    # -- pipeline -------------------------------------------------------------

    def run_pipeline_once(self, now: datetime | None = None) -> PipelineReport:
        with self._writer_lock:
            report = self.pipeline.run(self.connectors, now=now)
        self.last_report = report
        return report

    def make_scheduler(self, clock=None) -> Scheduler:
        return Scheduler(self.config.interval_seconds, self.run_pipeline_once, clock=clock)

    def ingest_lines(
        self, lines: list[str], source_kind: str, now: datetime | None = None
    ) -> dict:
        """Manual ingestion of raw record lines; per-line rejects reported."""
        rejects: list[dict] = []
        with self._writer_lock:
            report = self.pipeline.process_lines(
                lines, source_kind, now=now, rejected_detail=rejects
            )
        classified = report.stored if self.store.read_current_model() else 0
        return {
            "fetched": report.fetched,
            "stored": report.stored,
            "deduplicated": report.deduplicated,
            "classified": classified,
            "rejected": rejects,
        }

    # -- labeling ---------------------------------------------------------------

    def label_item(self, item_id: str, label: str, actor: str) -> tuple[LabelEvent, int | None]:
        """Apply one review decision; batch-retrain when the threshold fills.

        Returns the event and the new model version when a retrain ran.
        """
        with self._writer_lock:
            event = self.labeling.apply_label(item_id, label, actor)
            new_version = None
            if len(self.store.label_events_since_last_model()) >= self.config.batch_size:
                snapshot = self.labeling.retrain_pending()
                if snapshot is not None:
                    new_version = snapshot.version
        return event, new_version

    def review_queue(
        self, limit: int | None = None, filter: analytics.FocusFilter | None = None
    ) -> list[ReviewCandidate]:
        return self.labeling.uncertain_queue(filter, limit)

    # -- reads --------------------------------------------------------------------

    def heatmap(self, filter: analytics.FocusFilter) -> analytics.HeatmapGrid:
        return analytics.heatmap(self.store.snapshot_records(), filter, tz=self.config.timezone)

    def trends(self, window: str, filter: analytics.FocusFilter, now: datetime | None = None):
        return analytics.trend_report(
            self.store.snapshot_records(), window, now or datetime.now(timezone.utc), filter
        )

    def history(self, from_ts, to_ts, bucket: str, filter: analytics.FocusFilter):
        return analytics.time_series(
            self.store.snapshot_records(), from_ts, to_ts, bucket, filter, tz=self.config.timezone
        )

    def focus_page(self, filter: analytics.FocusFilter, offset: int, limit: int):
        return self.store.query(filter, offset=offset, limit=limit)

    def health(self) -> dict:
        model = self.store.read_current_model()
        return {
            "status": "ok",
            "model_version": model.version if model else None,
            "last_run_at": (
                self.last_report.finished_at.isoformat()
                if self.last_report and self.last_report.finished_at
                else None
            ),
            "items": len(self.store.snapshot_records()),
        }

    def close(self) -> None:
        self.store.close()
