"""Data marking and training-usage auditing for code repositories.

The heavy lifting lives in the compiled ``tracemark._core`` module; this
package adds small conveniences on top of it.
"""

import json as _json

from ._core import (
    ArgumentError,
    ConfigError,
    TransportError,
    mark_repository,
    pvalue,
    rank_sum_counts,
    simulate,
    threshold,
    token_edit_distance,
    tokenizer_id,
)
from ._core import detect as _detect_json

__all__ = [
    "ArgumentError",
    "ConfigError",
    "TransportError",
    "detect",
    "mark_repository",
    "pvalue",
    "rank_sum_counts",
    "simulate",
    "threshold",
    "token_edit_distance",
    "tokenizer_id",
]


def detect(repo, manifest, target, oracle, p="0.05", mode=None):
    """Runs detection and returns the report as a dict."""
    return _json.loads(_detect_json(repo, manifest, target, oracle, p, mode))
