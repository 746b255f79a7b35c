"""Formatting utilities for linkx reports.

Pure functions that turn library results into JSON/CSV text.
No dependencies on CLI state.
"""

import csv
import io
import json
import logging
import math
from typing import Any

from linkx_core.metrics import CompatibilityMatrix
from linkx_core.synth import NullModelPoint

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def format_duration(seconds: float) -> str:
    """Format a duration.

    Args:
        seconds: Elapsed seconds

    Returns:
        Human-readable duration (e.g., "850ms", "12.3s", "5m 30s", "1h 5m")
    """
    if not math.isfinite(seconds) or seconds < 0:
        return "?"
    if seconds < 1:
        return f"{int(seconds * 1000)}ms"
    if seconds < 60:
        return f"{seconds:.1f}s"
    if seconds < 3600:
        return f"{int(seconds // 60)}m {int(seconds % 60)}s"
    return f"{int(seconds // 3600)}h {int((seconds % 3600) // 60)}m"


def render_json(payload: dict[str, Any]) -> str:
    """Schema-versioned, key-sorted JSON with a trailing newline."""
    return json.dumps({"schema_version": SCHEMA_VERSION, **payload}, indent=2, sort_keys=True, allow_nan=False) + "\n"


def compatibility_csv(cm: CompatibilityMatrix) -> str:
    """CSV of H with one row per source class.

    Columns: ``class``, ``h_0 .. h_{C-1}``, ``no_edges`` (1 when the row is
    all zero because the class has no outgoing edges).
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["class", *(f"h_{k}" for k in range(cm.num_classes)), "no_edges"])
    for k in range(cm.num_classes):
        writer.writerow([k, *(repr(float(v)) for v in cm.values[k]), int(cm.zero_row_mask[k])])
    return out.getvalue()


def null_model_csv(points: list[NullModelPoint]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["majority_fraction", "mean_h", "se_h", "expected_h", "mean_improved", "se_improved", "samples"])
    for p in points:
        writer.writerow(
            [p.majority_fraction, repr(p.mean_h), repr(p.se_h), repr(p.expected_h), repr(p.mean_improved), repr(p.se_improved), p.samples]
        )
    return out.getvalue()


def format_summary(model: str, metric: str, scores: list[float]) -> str:
    """One-line mean +- std summary, scores shown as percentages."""
    if not scores:
        return f"{model}: no completed splits"
    mean = sum(scores) / len(scores)
    std = math.sqrt(sum((s - mean) ** 2 for s in scores) / len(scores))
    return f"{model}: test {metric} {100 * mean:.2f} ± {100 * std:.2f} over {len(scores)} splits"
