"""Feedback source connectors.

Both connectors return raw NDJSON record lines; parsing and validation
happen downstream in the pipeline so one bad line never poisons a batch.
Live platform crawling is out of scope: the file connector reads a local
fixture and the HTTP connector GETs the same line format from a URL.
"""

from __future__ import annotations

from pathlib import Path

import httpx

from .config import ConnectorConfig
from .errors import ConnectorFailure

HTTP_TIMEOUT = 10.0


class FileConnector:
    def __init__(self, name: str, source_kind: str, path: str | Path):
        self.name = name
        self.source_kind = source_kind
        self.path = Path(path)

    def fetch(self) -> list[str]:
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConnectorFailure(f"{self.name}: cannot read {self.path}: {exc}") from exc
        return [line for line in text.splitlines() if line.strip()]


class HttpConnector:
    def __init__(self, name: str, source_kind: str, url: str):
        self.name = name
        self.source_kind = source_kind
        self.url = url

    def fetch(self) -> list[str]:
        try:
            response = httpx.get(self.url, timeout=HTTP_TIMEOUT)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise ConnectorFailure(f"{self.name}: GET {self.url} failed: {exc}") from exc
        return [line for line in response.text.splitlines() if line.strip()]


def build_connector(spec: ConnectorConfig):
    if spec.file is not None:
        return FileConnector(spec.name, spec.source_kind, spec.file)
    return HttpConnector(spec.name, spec.source_kind, spec.url)
