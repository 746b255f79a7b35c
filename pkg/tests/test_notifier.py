"""Tests for linkx_core.notifier module."""

import logging

from linkx_core.notifier import LoggingNotifier, NoOpNotifier


class TestNotifiers:
    """Tests for the notifier implementations."""

    def test_noop_is_silent(self, caplog):
        """NoOpNotifier logs nothing."""
        with caplog.at_level(logging.DEBUG):
            notifier = NoOpNotifier()
            notifier.info("x")
            notifier.grid_point_done(0, {}, "failed", None)
        assert caplog.records == []

    def test_logging_levels(self, caplog):
        """Failed grid points log at WARNING, epochs at DEBUG."""
        notifier = LoggingNotifier()
        with caplog.at_level(logging.DEBUG, logger="linkx_core.notifier"):
            notifier.epoch(0, 1, 0.5, 0.9, 0.8)
            notifier.grid_point_done(0, {"hidden": 8}, "ok", 0.8)
            notifier.grid_point_done(1, {"hidden": 16}, "failed", None)
        levels = [r.levelno for r in caplog.records]
        assert levels == [logging.DEBUG, logging.INFO, logging.WARNING]
