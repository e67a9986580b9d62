"""Hi-ArG construction and pre-training sample factory."""

import json

from ._hiarg import (
    ConfigError,
    CorruptFile,
    HiargError,
    InvalidGraph,
    ParseError,
    Store,
    ValidationError,
    build,
    extract,
    format_config,
    parse_penman,
    relatives,
    run_all,
    sample_relatives,
    samples,
    serialize_penman,
    split_sentences,
    store_stats,
    tokenize,
    validate_graph,
    validate_path,
    validate_record,
)
from ._hiarg import shard_records as _shard_records

__all__ = [
    "ConfigError",
    "CorruptFile",
    "HiargError",
    "InvalidGraph",
    "ParseError",
    "Store",
    "ValidationError",
    "build",
    "extract",
    "format_config",
    "load_shard",
    "parse_penman",
    "relatives",
    "run_all",
    "sample_relatives",
    "samples",
    "serialize_penman",
    "split_sentences",
    "store_stats",
    "tokenize",
    "validate_graph",
    "validate_path",
    "validate_record",
]


def load_shard(path):
    """Samples of a shard file as dicts, after full validation."""
    return [json.loads(line) for line in _shard_records(str(path))]
