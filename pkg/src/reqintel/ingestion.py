"""Normalization of raw connector records into canonical feedback items.

Connector records arrive as JSON-object lines with keys id, text,
created_at (RFC 3339), and optional rating, author, lang. Normalization
trims, parses timestamps to UTC seconds precision, pseudonymizes authors
with a salted one-way hash, and fills in the language via stopword-profile
overlap when the record does not carry one.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources

from .classify import tokenize
from .errors import BadRating, BadRecord, BadTimestamp, MissingField

APP_STORE = "app_store"
MICROBLOG = "microblog"
CUSTOM = "custom"
SOURCE_KINDS = (APP_STORE, MICROBLOG, CUSTOM)

UNDETERMINED = "und"
LANGUAGE_MIN_TOKENS = 3
LANGUAGE_MIN_OVERLAP = 0.05

_profiles: dict[str, frozenset[str]] | None = None


@dataclass
class RawRecord:
    source_kind: str
    payload: dict

    def __post_init__(self):
        if self.source_kind not in SOURCE_KINDS:
            raise ValueError(f"unknown source kind: {self.source_kind!r}")


@dataclass
class FeedbackItem:
    id: str
    source: str
    text: str
    language: str
    created_at: datetime
    rating: int | None
    author_ref: str | None
    ingested_at: datetime

    @property
    def item_key(self) -> str:
        """Store-wide unique id; item ids are only unique per source."""
        return f"{self.source}:{self.id}"


def parse_record_line(line: str, source_kind: str) -> RawRecord:
    """One NDJSON connector line to a RawRecord; BadRecord if not a JSON object."""
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as exc:
        raise BadRecord(f"unparseable record line: {exc}") from exc
    if not isinstance(payload, dict):
        raise BadRecord("record line is not a JSON object")
    return RawRecord(source_kind=source_kind, payload=payload)


def _stopword_profiles() -> dict[str, frozenset[str]]:
    global _profiles
    if _profiles is None:
        profiles = {}
        for lang in ("en", "de"):
            text = resources.files("reqintel.data").joinpath(f"stopwords_{lang}.txt").read_text("utf-8")
            profiles[lang] = frozenset(w.strip() for w in text.splitlines() if w.strip())
        _profiles = profiles
    return _profiles


def detect_language(text: str) -> str:
    """Language whose stopword profile overlaps the token set most.

    Returns "und" for texts under 3 tokens or when the best overlap ratio
    stays below 0.05. Ties go to the alphabetically first language code.
    """
    tokens = tokenize(text)
    if len(tokens) < LANGUAGE_MIN_TOKENS:
        return UNDETERMINED
    token_set = set(tokens)
    best_lang = UNDETERMINED
    best_ratio = 0.0
    for lang in sorted(_stopword_profiles()):
        ratio = len(token_set & _stopword_profiles()[lang]) / len(token_set)
        if ratio > best_ratio:
            best_lang, best_ratio = lang, ratio
    if best_ratio < LANGUAGE_MIN_OVERLAP:
        return UNDETERMINED
    return best_lang


def pseudonymize(author: str, salt: str) -> str:
    digest = hashlib.sha256(f"{salt}:{author}".encode("utf-8")).hexdigest()
    return "u" + digest[:16]


def parse_timestamp(value: str) -> datetime:
    """RFC 3339 string to an aware UTC datetime at seconds precision."""
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError as exc:
        raise BadTimestamp(f"unparseable timestamp: {value!r}") from exc
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc).replace(microsecond=0)


def normalize_record(
    record: RawRecord,
    salt: str = "",
    now: datetime | None = None,
) -> FeedbackItem:
    """Map a validated raw record onto a FeedbackItem.

    Raises MissingField for absent/empty id, text, or created_at;
    BadTimestamp for unparseable or future created_at; BadRating for an
    app-store rating outside 1..5. Ratings on non-app-store records are
    dropped so the record shape stays uniform across connectors.
    """
    payload = record.payload

    def required(name: str) -> str:
        value = payload.get(name)
        text = str(value).strip() if value is not None else ""
        if not text:
            raise MissingField(name)
        return text

    item_id = required("id")
    text = required("text")
    created_at = parse_timestamp(required("created_at"))

    ingested_at = (now or datetime.now(timezone.utc)).astimezone(timezone.utc).replace(microsecond=0)
    if created_at > ingested_at:
        raise BadTimestamp(f"created_at {created_at.isoformat()} is in the future")

    rating = None
    if record.source_kind == APP_STORE and payload.get("rating") is not None:
        raw_rating = payload["rating"]
        try:
            rating = int(str(raw_rating))
        except ValueError:
            raise BadRating(f"rating is not an integer: {raw_rating!r}")
        if not 1 <= rating <= 5:
            raise BadRating(f"rating out of range 1..5: {rating}")

    lang = str(payload.get("lang") or "").strip().lower()
    language = lang if lang else detect_language(text)

    author = str(payload.get("author") or "").strip()
    author_ref = pseudonymize(author, salt) if author else None

    return FeedbackItem(
        id=item_id,
        source=record.source_kind,
        text=text,
        language=language,
        created_at=created_at,
        rating=rating,
        author_ref=author_ref,
        ingested_at=ingested_at,
    )


def deduplicate(
    candidates: list[FeedbackItem],
    known: set[tuple[str, str]],
) -> list[FeedbackItem]:
    """Drop items whose (source, id) is already known; first in batch wins."""
    seen = set(known)
    kept = []
    for item in candidates:
        key = (item.source, item.id)
        if key in seen:
            continue
        seen.add(key)
        kept.append(item)
    return kept
