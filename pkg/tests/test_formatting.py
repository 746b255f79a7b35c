"""Tests for formatting utilities."""

import json

import numpy as np
import pytest

from linkx_cli.formatting import (
    SCHEMA_VERSION,
    compatibility_csv,
    format_duration,
    format_summary,
    null_model_csv,
    render_json,
)
from linkx_core.metrics import compatibility_matrix
from linkx_core.synth import NullModelPoint


class TestFormatDuration:
    """Tests for format_duration function."""

    def test_milliseconds(self):
        """Sub-second durations are shown in ms."""
        assert format_duration(0.85) == "850ms"

    def test_seconds(self):
        """Under a minute keeps one decimal."""
        assert format_duration(12.34) == "12.3s"

    def test_minutes(self):
        """Minutes and seconds."""
        assert format_duration(330) == "5m 30s"

    def test_hours(self):
        """Hours and minutes."""
        assert format_duration(3900) == "1h 5m"

    def test_invalid(self):
        """Negative or non-finite durations show '?'."""
        assert format_duration(-1) == "?"
        assert format_duration(float("nan")) == "?"


class TestRenderJson:
    """Tests for render_json function."""

    def test_schema_version_and_order(self):
        """Output carries the schema version and sorted keys."""
        text = render_json({"b": 1, "a": [1.5]})
        assert text.endswith("\n")
        assert json.loads(text) == {"schema_version": SCHEMA_VERSION, "a": [1.5], "b": 1}
        assert text.index('"a"') < text.index('"b"')

    def test_rejects_nan(self):
        """NaN is not valid JSON."""
        with pytest.raises(ValueError):
            render_json({"x": float("nan")})


class TestCsv:
    """Tests for CSV renderers."""

    def test_compatibility_csv(self, pattern_pure_heterophily):
        """One row per class, zero-row flag last."""
        cm = compatibility_matrix(pattern_pure_heterophily.graph, pattern_pure_heterophily.labels)
        lines = compatibility_csv(cm).splitlines()
        assert lines[0] == "class,h_0,h_1,no_edges"
        assert lines[1] == "0,0.0,1.0,0"
        assert lines[2] == "1,1.0,0.0,0"

    def test_null_model_csv(self):
        """Header plus one row per majority fraction."""
        point = NullModelPoint(
            majority_fraction=0.5, mean_h=0.49, se_h=0.01, expected_h=0.5, mean_improved=0.02, se_improved=0.005, samples=10
        )
        lines = null_model_csv([point]).splitlines()
        assert lines[0].startswith("majority_fraction,mean_h")
        assert lines[1] == "0.5,0.49,0.01,0.5,0.02,0.005,10"


class TestFormatSummary:
    """Tests for format_summary function."""

    def test_summary(self):
        """Mean and population std as percentages."""
        assert format_summary("link", "accuracy", [0.8, 0.9]) == "link: test accuracy 85.00 ± 5.00 over 2 splits"

    def test_empty(self):
        """No scores."""
        assert format_summary("mlp", "accuracy", []) == "mlp: no completed splits"

    def test_matches_numpy(self):
        """Agrees with numpy's ddof=0 std."""
        scores = [0.71, 0.74, 0.69]
        std = np.std(scores)
        assert f"{100 * std:.2f}" in format_summary("mlp", "accuracy", scores)
