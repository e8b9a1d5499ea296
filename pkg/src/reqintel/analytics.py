"""Dashboard aggregations over an immutable view of the store.

All functions are pure: they take the joined records, a filter, and the
clock/timezone parameters, and never touch the store themselves. Intervals
are half-open ([from, to)) everywhere so adjacent windows and buckets never
double count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from zoneinfo import ZoneInfo

from .classify import INQUIRY, IRRELEVANT, LABELS, PROBLEM_REPORT
from .errors import BadRange, TooManyBuckets
from .sentiment import average_sentiment

RELEVANT_LABELS = (PROBLEM_REPORT, INQUIRY)

WINDOW_SIZES = {
    "day": timedelta(hours=24),
    "week": timedelta(days=7),
    "month": timedelta(days=30),
}

BUCKET_SIZES = {
    "hour": timedelta(hours=1),
    "day": timedelta(days=1),
    "week": timedelta(weeks=1),
}

MAX_BUCKETS = 10_000


@dataclass
class FocusFilter:
    keyword: str | None = None
    sources: set[str] | None = None
    languages: set[str] | None = None
    from_ts: datetime | None = None
    to_ts: datetime | None = None
    labels: set[str] | None = None
    relevant_only: bool = False

    def validate(self) -> None:
        if self.from_ts is not None and self.to_ts is not None and self.from_ts >= self.to_ts:
            raise BadRange(f"empty range: {self.from_ts} >= {self.to_ts}")

    def effective_labels(self) -> set[str] | None:
        """Label constraint after the relevant-only restriction, None = any."""
        if self.relevant_only:
            base = self.labels if self.labels is not None else set(LABELS)
            return base & set(RELEVANT_LABELS)
        return self.labels


@dataclass
class HeatmapGrid:
    cells: list[list[int]]  # 7 weekday rows (Mon..Sun) x 24 hour columns
    total: int


@dataclass
class TrendReport:
    window: str
    problem_count: int
    inquiry_count: int
    avg_sentiment: float | None
    problem_delta: int
    inquiry_delta: int
    sentiment_delta: float | None


@dataclass
class TimeSeriesPoint:
    bucket_start: datetime
    problem_count: int
    inquiry_count: int
    irrelevant_count: int
    avg_sentiment: float | None


@dataclass
class TimeSeries:
    bucket: str
    points: list[TimeSeriesPoint] = field(default_factory=list)


def apply_filter(records: list, filter: FocusFilter) -> list:
    """Conjunctive filtering, newest first (ties by item id).

    Records carrying a label constraint (labels set or relevant_only) only
    match items that have an effective label.
    """
    filter.validate()
    keyword = filter.keyword.lower() if filter.keyword else None
    labels = filter.effective_labels()

    matched = []
    for record in records:
        item = record.item
        if keyword is not None and keyword not in item.text.lower():
            continue
        if filter.sources is not None and item.source not in filter.sources:
            continue
        if filter.languages is not None and item.language not in filter.languages:
            continue
        if filter.from_ts is not None and item.created_at < filter.from_ts:
            continue
        if filter.to_ts is not None and item.created_at >= filter.to_ts:
            continue
        if labels is not None and record.effective_label not in labels:
            continue
        matched.append(record)

    matched.sort(key=lambda r: r.item.item_key)
    matched.sort(key=lambda r: r.item.created_at, reverse=True)
    return matched


def heatmap(records: list, filter: FocusFilter, tz: str = "UTC") -> HeatmapGrid:
    """Weekday x hour counts of feedback creation times in the display timezone."""
    zone = ZoneInfo(tz)
    cells = [[0] * 24 for _ in range(7)]
    total = 0
    for record in apply_filter(records, filter):
        local = record.item.created_at.astimezone(zone)
        cells[local.weekday()][local.hour] += 1
        total += 1
    return HeatmapGrid(cells=cells, total=total)


def _window_counts(records: list, start: datetime, end: datetime):
    problems = inquiries = 0
    scores = []
    for record in records:
        created = record.item.created_at
        if not start <= created < end:
            continue
        if record.effective_label == PROBLEM_REPORT:
            problems += 1
        elif record.effective_label == INQUIRY:
            inquiries += 1
        if record.sentiment is not None:
            scores.append(record.sentiment)
    return problems, inquiries, average_sentiment(scores)


def trend_report(records: list, window: str, now: datetime, filter: FocusFilter) -> TrendReport:
    """Counts and average sentiment for [now-W, now) with deltas vs [now-2W, now-W)."""
    if window not in WINDOW_SIZES:
        raise ValueError(f"unknown trend window: {window!r}")
    size = WINDOW_SIZES[window]
    filtered = apply_filter(records, filter)

    cur_problems, cur_inquiries, cur_sentiment = _window_counts(filtered, now - size, now)
    prev_problems, prev_inquiries, prev_sentiment = _window_counts(
        filtered, now - 2 * size, now - size
    )

    sentiment_delta = None
    if cur_sentiment is not None and prev_sentiment is not None:
        sentiment_delta = cur_sentiment - prev_sentiment

    return TrendReport(
        window=window,
        problem_count=cur_problems,
        inquiry_count=cur_inquiries,
        avg_sentiment=cur_sentiment,
        problem_delta=cur_problems - prev_problems,
        inquiry_delta=cur_inquiries - prev_inquiries,
        sentiment_delta=sentiment_delta,
    )


def _floor_bucket(instant: datetime, bucket: str, zone: ZoneInfo) -> datetime:
    local = instant.astimezone(zone)
    if bucket == "hour":
        floored = local.replace(minute=0, second=0, microsecond=0)
    else:
        floored = local.replace(hour=0, minute=0, second=0, microsecond=0)
        if bucket == "week":
            floored -= timedelta(days=floored.weekday())
    return floored.astimezone(timezone.utc)


def time_series(
    records: list,
    from_ts: datetime,
    to_ts: datetime,
    bucket: str,
    filter: FocusFilter,
    tz: str = "UTC",
) -> TimeSeries:
    """Contiguous zero-filled buckets covering [from, to).

    The first bucket start is `from` floored to a bucket boundary in the
    display timezone; buckets then advance by the fixed bucket duration.
    """
    if bucket not in BUCKET_SIZES:
        raise ValueError(f"unknown bucket size: {bucket!r}")
    if from_ts >= to_ts:
        raise BadRange(f"empty range: {from_ts} >= {to_ts}")

    zone = ZoneInfo(tz)
    step = BUCKET_SIZES[bucket]
    anchor = _floor_bucket(from_ts, bucket, zone)
    n_buckets = math.ceil((to_ts - anchor) / step)
    if n_buckets > MAX_BUCKETS:
        raise TooManyBuckets(f"{n_buckets} buckets exceed the {MAX_BUCKETS} cap")

    ranged = FocusFilter(
        keyword=filter.keyword,
        sources=filter.sources,
        languages=filter.languages,
        from_ts=max(from_ts, filter.from_ts) if filter.from_ts else from_ts,
        to_ts=min(to_ts, filter.to_ts) if filter.to_ts else to_ts,
        labels=filter.labels,
        relevant_only=filter.relevant_only,
    )
    filtered = apply_filter(records, ranged)

    buckets: list[list] = [[] for _ in range(n_buckets)]
    for record in filtered:
        index = (record.item.created_at - anchor) // step
        buckets[index].append(record)

    points = []
    for k in range(n_buckets):
        start = anchor + k * step
        problems = inquiries = irrelevant = 0
        scores = []
        for record in buckets[k]:
            if record.effective_label == PROBLEM_REPORT:
                problems += 1
            elif record.effective_label == INQUIRY:
                inquiries += 1
            elif record.effective_label == IRRELEVANT:
                irrelevant += 1
            if record.sentiment is not None:
                scores.append(record.sentiment)
        points.append(
            TimeSeriesPoint(
                bucket_start=start,
                problem_count=problems,
                inquiry_count=inquiries,
                irrelevant_count=irrelevant,
                avg_sentiment=average_sentiment(scores),
            )
        )
    return TimeSeries(bucket=bucket, points=points)
