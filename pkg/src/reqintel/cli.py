"""Command line entry point: serve, run-once, and train."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .api import create_app
from .config import Config, load_config
from .errors import ReqIntelError
from .service import FeedbackService

logger = logging.getLogger(__name__)


def _load(args) -> Config:
    if args.config:
        return load_config(args.config)
    return Config()


def cmd_serve(args) -> int:
    import uvicorn

    config = _load(args)
    service = FeedbackService(config)
    if service.store.read_current_model() is None:
        logger.warning("no trained model yet; run `reqintel train` to enable classification")
    scheduler = service.make_scheduler().start()
    try:
        uvicorn.run(create_app(service), host=config.bind_host, port=config.bind_port)
    finally:
        scheduler.stop()
        service.close()
    return 0


def cmd_run_once(args) -> int:
    config = _load(args)
    if args.source_file:
        config.connectors = []
        from .config import ConnectorConfig

        config.connectors.append(
            ConnectorConfig(name="cli", source_kind=args.source_kind, file=args.source_file)
        )
    service = FeedbackService(config)
    try:
        report = service.run_pipeline_once()
    finally:
        service.close()
    print(
        json.dumps(
            {
                "run_id": report.run_id,
                "connectors": {
                    name: {
                        "fetched": c.fetched,
                        "rejected": c.rejected,
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
            },
            indent=2,
        )
    )
    return 0


def cmd_train(args) -> int:
    config = _load(args)
    service = FeedbackService(config)
    try:
        snapshot = service.train_bootstrap(args.bootstrap)
    finally:
        service.close()
    print(f"published model version {snapshot.version} " f"({snapshot.corpus_size} documents)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reqintel", description="user feedback intelligence service")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the API with the pipeline scheduler")
    serve.add_argument("--config", help="path to the config file")
    serve.set_defaults(func=cmd_serve)

    once = sub.add_parser("run-once", help="run one pipeline pass and exit")
    once.add_argument("--config", help="path to the config file")
    once.add_argument("--source-file", help="ingest a single NDJSON fixture instead of configured connectors")
    once.add_argument(
        "--source-kind",
        default="custom",
        choices=["app_store", "microblog", "custom"],
        help="source kind for --source-file",
    )
    once.set_defaults(func=cmd_run_once)

    train = sub.add_parser("train", help="train and publish a model from a labeled corpus")
    train.add_argument("--config", help="path to the config file")
    train.add_argument("--bootstrap", help="labeled NDJSON corpus (defaults to the shipped one)")
    train.set_defaults(func=cmd_train)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ReqIntelError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
