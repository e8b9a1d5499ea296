"""Service configuration.

Config files are plain ``key = value`` lines with ``#`` comments. Dotted
keys select the subsystem; connectors are declared with a shared name
prefix, one block per source:

    pipeline.interval_seconds = 7200
    classifier.tau = 0.2
    storage.dir = data
    connector.reviews.source_kind = app_store
    connector.reviews.file = fixtures/reviews.ndjson
    connector.tweets.source_kind = microblog
    connector.tweets.url = http://127.0.0.1:9000/feed
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .ingestion import SOURCE_KINDS

DEFAULT_INTERVAL_SECONDS = 7200
DEFAULT_ALPHA = 1.0
DEFAULT_TAU = 0.2
DEFAULT_BATCH_SIZE = 10
DEFAULT_QUEUE_LIMIT = 50
DEFAULT_BIND = "127.0.0.1:8080"


def packaged_data_path(name: str) -> str:
    return str(resources.files("reqintel.data").joinpath(name))


@dataclass
class ConnectorConfig:
    name: str
    source_kind: str
    file: str | None = None
    url: str | None = None

    def __post_init__(self):
        if self.source_kind not in SOURCE_KINDS:
            raise ConfigError(f"connector {self.name}: unknown source_kind {self.source_kind!r}")
        if bool(self.file) == bool(self.url):
            raise ConfigError(f"connector {self.name}: exactly one of file/url required")


@dataclass
class Config:
    storage_dir: str = "data"
    interval_seconds: int = DEFAULT_INTERVAL_SECONDS
    alpha: float = DEFAULT_ALPHA
    tau: float = DEFAULT_TAU
    lexicon_path: str = field(default_factory=lambda: packaged_data_path("lexicon.tsv"))
    bootstrap_path: str = field(default_factory=lambda: packaged_data_path("bootstrap.ndjson"))
    timezone: str = "UTC"
    batch_size: int = DEFAULT_BATCH_SIZE
    queue_limit: int = DEFAULT_QUEUE_LIMIT
    bind: str = DEFAULT_BIND
    cors_origin: str | None = None
    auth_token: str | None = None
    salt: str = "reqintel"
    connectors: list[ConnectorConfig] = field(default_factory=list)

    @property
    def bind_host(self) -> str:
        return self.bind.rsplit(":", 1)[0]

    @property
    def bind_port(self) -> int:
        return int(self.bind.rsplit(":", 1)[1])


_SCALAR_KEYS = {
    "storage.dir": ("storage_dir", str),
    "pipeline.interval_seconds": ("interval_seconds", int),
    "classifier.alpha": ("alpha", float),
    "classifier.tau": ("tau", float),
    "classifier.bootstrap_path": ("bootstrap_path", str),
    "sentiment.lexicon_path": ("lexicon_path", str),
    "analytics.timezone": ("timezone", str),
    "active_learning.batch_size": ("batch_size", int),
    "active_learning.queue_limit": ("queue_limit", int),
    "api.bind": ("bind", str),
    "api.cors_origin": ("cors_origin", str),
    "api.auth_token": ("auth_token", str),
    "ingestion.salt": ("salt", str),
}


def parse_config_lines(lines: list[str], base_dir: Path | None = None) -> Config:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()

    config = Config()
    connector_fields: dict[str, dict[str, str]] = {}
    for key, value in values.items():
        if key in _SCALAR_KEYS:
            attr, cast = _SCALAR_KEYS[key]
            try:
                setattr(config, attr, cast(value))
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {value!r}") from exc
        elif key.startswith("connector."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ConfigError(f"bad connector key: {key}")
            connector_fields.setdefault(parts[1], {})[parts[2]] = value
        else:
            raise ConfigError(f"unknown config key: {key}")

    def resolve(path: str) -> str:
        p = Path(path)
        if base_dir is not None and not p.is_absolute():
            return str(base_dir / p)
        return str(p)

    for name in sorted(connector_fields):
        fields = connector_fields[name]
        unknown = set(fields) - {"source_kind", "file", "url"}
        if unknown:
            raise ConfigError(f"connector {name}: unknown keys {sorted(unknown)}")
        if "source_kind" not in fields:
            raise ConfigError(f"connector {name}: source_kind is required")
        config.connectors.append(
            ConnectorConfig(
                name=name,
                source_kind=fields["source_kind"],
                file=resolve(fields["file"]) if "file" in fields else None,
                url=fields.get("url"),
            )
        )

    for attr in ("storage_dir", "lexicon_path", "bootstrap_path"):
        setattr(config, attr, resolve(getattr(config, attr)))
    return config


def load_config(path: str | Path) -> Config:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_lines(lines, base_dir=path.resolve().parent)
