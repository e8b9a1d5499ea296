"""HTTP interface under /api/v1 (see docs/API.md for the full reference).

Read endpoints are open and side-effect free; mutating endpoints optionally
require a static bearer token and funnel into the service's single-writer
path. Every service error maps to exactly one (status, code) pair and comes
back as a structured body, never a stack trace.
"""

from __future__ import annotations

from datetime import datetime

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from . import analytics
from .active_learning import ReviewCandidate, allowed_relabels
from .classify import LABELS, Classification
from .errors import BadRange, ReqIntelError, UnknownLabel
from .ingestion import SOURCE_KINDS, parse_timestamp
from .sentiment import SentimentScore
from .service import FeedbackService
from .storage import JoinedRecord

STATUS_BY_CODE = {
    "MISSING_FIELD": 400,
    "BAD_TIMESTAMP": 400,
    "BAD_RATING": 400,
    "BAD_RECORD": 400,
    "BAD_RANGE": 400,
    "BAD_PAGE": 400,
    "TOO_MANY_BUCKETS": 400,
    "UNKNOWN_LABEL": 400,
    "BAD_DISTRIBUTION": 400,
    "EMPTY_CORPUS": 400,
    "EMPTY_UPDATE": 400,
    "BAD_INTERVAL": 400,
    "CONFIG_ERROR": 400,
    "NOT_FOUND": 404,
    "NOT_UNCERTAIN": 409,
    "ALREADY_LABELED": 409,
    "DUPLICATE_LABEL": 409,
    "UNTRAINED_MODEL": 409,
    "STORAGE_UNAVAILABLE": 503,
    "CONNECTOR_FAILURE": 502,
    "INTERNAL": 500,
}


def _error_response(code: str, message: str) -> JSONResponse:
    status = STATUS_BY_CODE.get(code, 500)
    return JSONResponse(
        status_code=status, content={"status": status, "code": code, "message": message}
    )


def _parse_ts(value: str | None, name: str) -> datetime | None:
    if value is None or value == "":
        return None
    try:
        return parse_timestamp(value)
    except ReqIntelError:
        raise BadRange(f"unparseable {name} timestamp: {value!r}")


def _parse_set(value: str | None) -> set[str] | None:
    if value is None or value == "":
        return None
    return {part.strip() for part in value.split(",") if part.strip()}


def _build_filter(
    keyword: str | None,
    sources: str | None,
    languages: str | None,
    from_: str | None,
    to: str | None,
    labels: str | None,
    relevant_only: bool,
) -> analytics.FocusFilter:
    label_set = _parse_set(labels)
    if label_set is not None:
        unknown = label_set - set(LABELS)
        if unknown:
            raise UnknownLabel(f"unknown labels: {sorted(unknown)}")
    source_set = _parse_set(sources)
    if source_set is not None:
        unknown = source_set - set(SOURCE_KINDS)
        if unknown:
            raise BadRange(f"unknown sources: {sorted(unknown)}")
    filter = analytics.FocusFilter(
        keyword=keyword or None,
        sources=source_set,
        languages=_parse_set(languages),
        from_ts=_parse_ts(from_, "from"),
        to_ts=_parse_ts(to, "to"),
        labels=label_set,
        relevant_only=relevant_only,
    )
    filter.validate()
    return filter


def _classification_json(c: Classification | None) -> dict | None:
    if c is None:
        return None
    return {
        "item_id": c.item_id,
        "label": c.label,
        "probabilities": c.probabilities,
        "margin": c.margin,
        "uncertain": c.uncertain,
        "model_version": c.model_version,
    }


def _sentiment_json(s: SentimentScore | None) -> dict | None:
    if s is None:
        return None
    return {"value": s.value, "polarity": s.polarity, "hits": s.hits}


def _record_json(record: JoinedRecord) -> dict:
    item = record.item
    labelable = (
        record.classification is not None
        and record.classification.uncertain
        and record.label_event is None
    )
    return {
        "item": {
            "id": item.item_key,
            "source": item.source,
            "text": item.text,
            "language": item.language,
            "created_at": item.created_at.isoformat(),
            "rating": item.rating,
            "author_ref": item.author_ref,
            "ingested_at": item.ingested_at.isoformat(),
        },
        "classification": _classification_json(record.classification),
        "sentiment": _sentiment_json(record.sentiment),
        "label_event": _label_event_json(record.label_event),
        "effective_label": record.effective_label,
        "review": {
            "uncertain": bool(record.classification and record.classification.uncertain),
            "labelable": labelable,
            "allowed_relabels": (
                allowed_relabels(record.classification.label) if labelable else []
            ),
        },
    }


def _label_event_json(event) -> dict | None:
    if event is None:
        return None
    return {
        "item_id": event.item_id,
        "assigned_label": event.assigned_label,
        "action": event.action,
        "prior_label": event.prior_label,
        "actor": event.actor,
        "decided_at": event.decided_at.isoformat(),
        "model_version_at_decision": event.model_version_at_decision,
    }


def _candidate_json(candidate: ReviewCandidate) -> dict:
    return {
        "item_id": candidate.item_id,
        "excerpt": candidate.excerpt,
        "classification": _classification_json(candidate.classification),
        "allowed_relabels": candidate.allowed_relabels,
    }


def create_app(service: FeedbackService) -> FastAPI:
    app = FastAPI(title="reqintel", docs_url=None, redoc_url=None)

    if service.config.cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[service.config.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ReqIntelError)
    async def handle_service_error(request: Request, exc: ReqIntelError):
        return _error_response(exc.code, str(exc))

    def check_auth(request: Request) -> JSONResponse | None:
        token = service.config.auth_token
        if not token:
            return None
        header = request.headers.get("authorization", "")
        if header != f"Bearer {token}":
            return JSONResponse(
                status_code=401,
                content={"status": 401, "code": "UNAUTHORIZED", "message": "bad or missing token"},
            )
        return None

    # -- dashboard reads ---------------------------------------------------

    @app.get("/api/v1/dashboard/heatmap")
    def dashboard_heatmap(
        keyword: str | None = None,
        sources: str | None = None,
        languages: str | None = None,
        from_: str | None = Query(default=None, alias="from"),
        to: str | None = None,
        labels: str | None = None,
        relevant_only: bool = False,
    ):
        filter = _build_filter(keyword, sources, languages, from_, to, labels, relevant_only)
        grid = service.heatmap(filter)
        return {"cells": grid.cells, "total": grid.total}

    @app.get("/api/v1/dashboard/trends")
    def dashboard_trends(
        window: str,
        keyword: str | None = None,
        sources: str | None = None,
        languages: str | None = None,
        from_: str | None = Query(default=None, alias="from"),
        to: str | None = None,
        labels: str | None = None,
        relevant_only: bool = False,
    ):
        if window not in analytics.WINDOW_SIZES:
            return _error_response("BAD_RANGE", f"unknown window: {window!r}")
        filter = _build_filter(keyword, sources, languages, from_, to, labels, relevant_only)
        report = service.trends(window, filter)
        return {
            "window": report.window,
            "problem_count": report.problem_count,
            "inquiry_count": report.inquiry_count,
            "avg_sentiment": report.avg_sentiment,
            "deltas": {
                "problems": report.problem_delta,
                "inquiries": report.inquiry_delta,
                "sentiment": report.sentiment_delta,
            },
        }

    @app.get("/api/v1/dashboard/history")
    def dashboard_history(
        bucket: str,
        from_: str = Query(alias="from"),
        to: str = Query(),
        keyword: str | None = None,
        sources: str | None = None,
        languages: str | None = None,
        labels: str | None = None,
        relevant_only: bool = False,
    ):
        if bucket not in analytics.BUCKET_SIZES:
            return _error_response("BAD_RANGE", f"unknown bucket: {bucket!r}")
        from_ts = _parse_ts(from_, "from")
        to_ts = _parse_ts(to, "to")
        if from_ts is None or to_ts is None:
            return _error_response("BAD_RANGE", "from and to are required")
        filter = _build_filter(keyword, sources, languages, None, None, labels, relevant_only)
        series = service.history(from_ts, to_ts, bucket, filter)
        return {
            "bucket": series.bucket,
            "points": [
                {
                    "bucket_start": p.bucket_start.isoformat(),
                    "problem_count": p.problem_count,
                    "inquiry_count": p.inquiry_count,
                    "irrelevant_count": p.irrelevant_count,
                    "avg_sentiment": p.avg_sentiment,
                }
                for p in series.points
            ],
        }

    # -- focus views ------------------------------------------------------------

    def focus_view(
        label: str,
        keyword,
        sources,
        languages,
        from_,
        to,
        offset: int,
        limit: int,
    ):
        filter = _build_filter(keyword, sources, languages, from_, to, None, False)
        filter.labels = {label}
        page, total = service.focus_page(filter, offset=offset, limit=limit)
        return {
            "total": total,
            "offset": offset,
            "limit": limit,
            "items": [_record_json(r) for r in page],
        }

    @app.get("/api/v1/focus/problems")
    def focus_problems(
        keyword: str | None = None,
        sources: str | None = None,
        languages: str | None = None,
        from_: str | None = Query(default=None, alias="from"),
        to: str | None = None,
        offset: int = 0,
        limit: int = 50,
    ):
        return focus_view("problem_report", keyword, sources, languages, from_, to, offset, limit)

    @app.get("/api/v1/focus/inquiries")
    def focus_inquiries(
        keyword: str | None = None,
        sources: str | None = None,
        languages: str | None = None,
        from_: str | None = Query(default=None, alias="from"),
        to: str | None = None,
        offset: int = 0,
        limit: int = 50,
    ):
        return focus_view("inquiry", keyword, sources, languages, from_, to, offset, limit)

    # -- review / labeling ---------------------------------------------------------

    @app.get("/api/v1/review/queue")
    def review_queue(limit: int | None = None):
        candidates = service.review_queue(limit=limit)
        return {"candidates": [_candidate_json(c) for c in candidates]}

    @app.post("/api/v1/feedback/{item_id}/label")
    async def label_feedback(item_id: str, request: Request):
        denied = check_auth(request)
        if denied is not None:
            return denied
        body = await request.json()
        label = body.get("label")
        actor = str(body.get("actor") or "anonymous")
        if not isinstance(label, str):
            return _error_response("UNKNOWN_LABEL", "body must carry a string `label`")
        event, new_version = service.label_item(item_id, label, actor)
        payload = _label_event_json(event)
        payload["retrained"] = new_version is not None
        payload["new_model_version"] = new_version
        return payload

    # -- ingestion / operations ------------------------------------------------------

    @app.post("/api/v1/ingest")
    async def ingest(request: Request, source_kind: str = "custom"):
        denied = check_auth(request)
        if denied is not None:
            return denied
        if source_kind not in SOURCE_KINDS:
            return _error_response("BAD_RECORD", f"unknown source_kind: {source_kind!r}")
        body = (await request.body()).decode("utf-8")
        lines = [line for line in body.splitlines() if line.strip()]
        result = service.ingest_lines(lines, source_kind)
        status = 207 if result["rejected"] else 200
        return JSONResponse(status_code=status, content=result)

    @app.post("/api/v1/pipeline/run")
    async def pipeline_run(request: Request):
        denied = check_auth(request)
        if denied is not None:
            return denied
        report = service.run_pipeline_once()
        return {
            "run_id": report.run_id,
            "started_at": report.started_at.isoformat(),
            "finished_at": report.finished_at.isoformat() if report.finished_at else None,
            "connectors": {
                name: {
                    "fetched": c.fetched,
                    "rejected": c.rejected,
                    "rejected_by_kind": c.rejected_by_kind,
                    "deduplicated": c.deduplicated,
                    "stored": c.stored,
                    "failure": c.failure,
                }
                for name, c in report.connectors.items()
            },
            "classified": report.classified,
            "pending": report.pending,
            "retrained": report.retrained,
            "new_model_version": report.new_model_version,
        }

    @app.get("/api/v1/health")
    def health():
        return service.health()

    return app
