import pytest

from reqintel.config import Config, load_config, parse_config_lines
from reqintel.errors import ConfigError


class TestDefaults:
    def test_fields(self):
        config = Config()
        assert config.interval_seconds == 7200
        assert config.alpha == 1.0
        assert config.tau == 0.2
        assert config.batch_size == 10
        assert config.queue_limit == 50
        assert config.timezone == "UTC"
        assert config.bind == "127.0.0.1:8080"
        assert config.connectors == []

    def test_packaged_data_defaults_exist(self):
        import os

        config = Config()
        assert os.path.exists(config.lexicon_path)
        assert os.path.exists(config.bootstrap_path)

    def test_bind_parsing(self):
        config = Config(bind="0.0.0.0:9999")
        assert config.bind_host == "0.0.0.0"
        assert config.bind_port == 9999


class TestParsing:
    def test_full_file(self, tmp_path):
        path = tmp_path / "reqintel.conf"
        path.write_text(
            "# service config\n"
            "pipeline.interval_seconds = 3600\n"
            "classifier.alpha = 0.5\n"
            "classifier.tau = 0.3\n"
            "storage.dir = state\n"
            "analytics.timezone = Europe/Berlin\n"
            "active_learning.batch_size = 5\n"
            "api.bind = 0.0.0.0:8088\n"
            "api.auth_token = sekrit\n"
            "connector.reviews.source_kind = app_store\n"
            "connector.reviews.file = fixtures/reviews.ndjson\n"
            "connector.tweets.source_kind = microblog\n"
            "connector.tweets.url = http://localhost:9000/feed\n",
            encoding="utf-8",
        )
        config = load_config(path)
        assert config.interval_seconds == 3600
        assert config.alpha == 0.5
        assert config.tau == 0.3
        assert config.timezone == "Europe/Berlin"
        assert config.batch_size == 5
        assert config.auth_token == "sekrit"
        assert config.storage_dir == str(tmp_path / "state")
        assert len(config.connectors) == 2
        reviews = config.connectors[0]
        assert reviews.name == "reviews"
        assert reviews.source_kind == "app_store"
        assert reviews.file == str(tmp_path / "fixtures/reviews.ndjson")
        tweets = config.connectors[1]
        assert tweets.url == "http://localhost:9000/feed"

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_config_lines(["nonsense.key = 1"])

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            parse_config_lines(["pipeline.interval_seconds = soon"])

    def test_missing_equals(self):
        with pytest.raises(ConfigError):
            parse_config_lines(["just some words"])

    def test_connector_needs_source_kind(self):
        with pytest.raises(ConfigError):
            parse_config_lines(["connector.x.file = foo.ndjson"])

    def test_connector_needs_exactly_one_of_file_url(self):
        with pytest.raises(ConfigError):
            parse_config_lines(
                [
                    "connector.x.source_kind = custom",
                    "connector.x.file = a.ndjson",
                    "connector.x.url = http://x",
                ]
            )
        with pytest.raises(ConfigError):
            parse_config_lines(["connector.x.source_kind = custom"])

    def test_connector_bad_source_kind(self):
        with pytest.raises(ConfigError):
            parse_config_lines(
                ["connector.x.source_kind = pigeon", "connector.x.file = a.ndjson"]
            )

    def test_comments_and_blanks_ignored(self):
        config = parse_config_lines(["", "# comment", "classifier.tau = 0.4", ""])
        assert config.tau == 0.4

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.conf")
