"""Pluggable progress notification for training runs.

Allows the training loop to decouple from the logging implementation.
Can be replaced with custom handlers for testing, embedding, or progress bars.
"""

import logging
from typing import Any, Protocol

logger = logging.getLogger(__name__)


class RunNotifier(Protocol):
    """Protocol for notifications - host can provide custom implementation."""

    def info(self, message: str) -> None:
        """Informational message."""
        ...

    def warning(self, message: str) -> None:
        """Warning message."""
        ...

    def epoch(self, grid_index: int, epoch: int, loss: float, train: float, val: float) -> None:
        """Progress after one training epoch."""
        ...

    def grid_point_done(self, grid_index: int, hyper: dict[str, Any], status: str, best_val: float | None) -> None:
        """A grid point finished (status "ok" or "failed")."""
        ...


class NoOpNotifier:
    """Silent no-op notifier - default for library use."""

    def info(self, message: str) -> None:
        pass

    def warning(self, message: str) -> None:
        pass

    def epoch(self, grid_index: int, epoch: int, loss: float, train: float, val: float) -> None:
        pass

    def grid_point_done(self, grid_index: int, hyper: dict[str, Any], status: str, best_val: float | None) -> None:
        pass


class LoggingNotifier:
    """Implementation using stdlib logging - used by the CLI."""

    def info(self, message: str) -> None:
        logger.info(message)

    def warning(self, message: str) -> None:
        logger.warning(message)

    def epoch(self, grid_index: int, epoch: int, loss: float, train: float, val: float) -> None:
        logger.debug(f"[grid {grid_index}] epoch {epoch}: loss={loss:.4f} train={train:.4f} val={val:.4f}")

    def grid_point_done(self, grid_index: int, hyper: dict[str, Any], status: str, best_val: float | None) -> None:
        if status == "ok":
            logger.info(f"[grid {grid_index}] {hyper}: best val {best_val:.4f}")
        else:
            logger.warning(f"[grid {grid_index}] {hyper}: {status}")
