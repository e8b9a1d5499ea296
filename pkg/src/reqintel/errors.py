"""Exception types raised across the service.

Every error that can cross the API boundary carries a stable machine code
(see reqintel.api for the status mapping).
"""


class ReqIntelError(Exception):
    """Base class for all service errors."""

    code = "INTERNAL"


class MissingField(ReqIntelError):
    code = "MISSING_FIELD"

    def __init__(self, name: str):
        super().__init__(f"missing or empty field: {name}")
        self.name = name


class BadTimestamp(ReqIntelError):
    code = "BAD_TIMESTAMP"


class BadRecord(ReqIntelError):
    code = "BAD_RECORD"


class BadRating(ReqIntelError):
    code = "BAD_RATING"


class EmptyCorpus(ReqIntelError):
    code = "EMPTY_CORPUS"


class UntrainedModel(ReqIntelError):
    code = "UNTRAINED_MODEL"


class BadDistribution(ReqIntelError):
    code = "BAD_DISTRIBUTION"


class UnknownLabel(ReqIntelError):
    code = "UNKNOWN_LABEL"


class NotFound(ReqIntelError):
    code = "NOT_FOUND"

    def __init__(self, item_id: str):
        super().__init__(f"no such item: {item_id}")
        self.item_id = item_id


class NotUncertain(ReqIntelError):
    code = "NOT_UNCERTAIN"


class AlreadyLabeled(ReqIntelError):
    code = "ALREADY_LABELED"


class EmptyUpdate(ReqIntelError):
    code = "EMPTY_UPDATE"


class BadRange(ReqIntelError):
    code = "BAD_RANGE"


class TooManyBuckets(ReqIntelError):
    code = "TOO_MANY_BUCKETS"


class BadPage(ReqIntelError):
    code = "BAD_PAGE"


class DuplicateLabel(ReqIntelError):
    code = "DUPLICATE_LABEL"


class StorageUnavailable(ReqIntelError):
    code = "STORAGE_UNAVAILABLE"


class BadInterval(ReqIntelError):
    code = "BAD_INTERVAL"


class ConnectorFailure(ReqIntelError):
    code = "CONNECTOR_FAILURE"


class ConfigError(ReqIntelError):
    code = "CONFIG_ERROR"
