"""Pipeline runs and the fixed-interval scheduler.

A run walks each connector through fetch, normalize, dedup, classify,
score, store; connector failures are isolated so one dead source never
aborts the others. The scheduler fires runs on a fixed cadence anchored at
the first run start, skipping (and counting) any tick that lands while a
run is still in flight. Time is injectable so cadence logic is testable
without waiting.
"""

from __future__ import annotations

import logging
import threading
import time
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .classify import extract_features, predict, tokenize
from .errors import BadInterval, ConnectorFailure, ReqIntelError
from .ingestion import deduplicate, normalize_record, parse_record_line
from .sentiment import score_sentiment

logger = logging.getLogger(__name__)

DEFAULT_INTERVAL_SECONDS = 7200
MIN_INTERVAL_SECONDS = 60


@dataclass
class ConnectorReport:
    fetched: int = 0
    rejected: int = 0
    rejected_by_kind: dict[str, int] = field(default_factory=dict)
    deduplicated: int = 0
    stored: int = 0
    failure: str | None = None


@dataclass
class PipelineReport:
    run_id: str
    started_at: datetime
    finished_at: datetime | None = None
    connectors: dict[str, ConnectorReport] = field(default_factory=dict)
    classified: int = 0
    pending: int = 0
    retrained: bool = False
    new_model_version: int | None = None


class Pipeline:
    """Crawl, classify, and store across configured connectors."""

    def __init__(self, store, labeling, lexicon, salt: str = "", tau: float = 0.2):
        self.store = store
        self.labeling = labeling
        self.lexicon = lexicon
        self.salt = salt
        self.tau = tau

    def process_lines(
        self,
        lines: list[str],
        source_kind: str,
        now: datetime | None = None,
        report: ConnectorReport | None = None,
        rejected_detail: list | None = None,
    ) -> ConnectorReport:
        """Normalize, dedup, store, classify, and score a batch of record lines."""
        report = report or ConnectorReport()
        report.fetched += len(lines)

        candidates = []
        for lineno, line in enumerate(lines, 1):
            try:
                record = parse_record_line(line, source_kind)
                candidates.append(normalize_record(record, salt=self.salt, now=now))
            except ReqIntelError as exc:
                report.rejected += 1
                report.rejected_by_kind[exc.code] = report.rejected_by_kind.get(exc.code, 0) + 1
                if rejected_detail is not None:
                    rejected_detail.append({"line": lineno, "code": exc.code, "message": str(exc)})

        kept = deduplicate(candidates, self.store.known_keys())
        stored = self.store.upsert_items(kept)
        # Items another writer slipped in between dedup and upsert count as duplicates.
        report.deduplicated += len(candidates) - stored
        report.stored += stored

        model = self.store.read_current_model()
        for item in kept:
            tokens = tokenize(item.text)
            self.store.put_sentiment(item.item_key, score_sentiment(tokens, self.lexicon))
            if model is not None:
                self.store.put_classification(
                    predict(model, extract_features(tokens), tau=self.tau, item_id=item.item_key)
                )
        return report

    def run(self, connectors: list, now: datetime | None = None) -> PipelineReport:
        started = now or datetime.now(timezone.utc)
        report = PipelineReport(run_id=uuid.uuid4().hex[:12], started_at=started)
        model_before = self.store.read_current_model()

        for connector in connectors:
            connector_report = ConnectorReport()
            report.connectors[connector.name] = connector_report
            try:
                lines = connector.fetch()
            except ConnectorFailure as exc:
                logger.warning("connector %s failed: %s", connector.name, exc)
                connector_report.failure = str(exc)
                continue
            self.process_lines(lines, connector.source_kind, now=now, report=connector_report)

        stored_total = sum(c.stored for c in report.connectors.values())
        if model_before is not None:
            report.classified = stored_total
        else:
            report.pending = stored_total

        new_model = self.labeling.retrain_pending()
        if new_model is not None:
            report.retrained = True
            report.new_model_version = new_model.version

        report.finished_at = now or datetime.now(timezone.utc)
        return report


class SystemClock:
    """Real time source; wait() doubles as the stop signal."""

    def __init__(self):
        self._stop = threading.Event()

    def monotonic(self) -> float:
        return time.monotonic()

    def wait(self, seconds: float) -> bool:
        return self._stop.wait(seconds)

    def request_stop(self) -> None:
        self._stop.set()

    def stop_requested(self) -> bool:
        return self._stop.is_set()


class Scheduler:
    """Fixed-cadence runner: ticks every `interval` from the first run start."""

    def __init__(self, interval_seconds: float, run, clock=None):
        if interval_seconds < MIN_INTERVAL_SECONDS:
            raise BadInterval(f"interval must be >= {MIN_INTERVAL_SECONDS} s")
        self.interval = interval_seconds
        self.run = run
        self.clock = clock or SystemClock()
        self.skipped_ticks = 0
        self.completed_runs = 0
        self._thread: threading.Thread | None = None

    def run_loop(self) -> None:
        next_tick = self.clock.monotonic()
        while True:
            delay = next_tick - self.clock.monotonic()
            if delay > 0 and self.clock.wait(delay):
                break
            if self.clock.stop_requested():
                break
            try:
                self.run()
            except Exception:
                logger.exception("pipeline run failed; next tick unaffected")
            self.completed_runs += 1
            finished = self.clock.monotonic()
            next_tick += self.interval
            while next_tick < finished:
                # This tick's slot elapsed while the run was in flight.
                self.skipped_ticks += 1
                logger.warning("skipping overlapped pipeline tick")
                next_tick += self.interval

    def start(self) -> "Scheduler":
        self._thread = threading.Thread(target=self.run_loop, daemon=True, name="reqintel-scheduler")
        self._thread.start()
        return self

    def stop(self) -> None:
        """Prevent future ticks and wait for an in-flight run to finish."""
        self.clock.request_stop()
        if self._thread is not None:
            self._thread.join()
