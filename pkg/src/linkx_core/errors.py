"""Exception hierarchy for linkx_core.

Input errors also derive from ValueError and numeric failures from
FloatingPointError.
"""

from pathlib import Path


class LinkxError(Exception):
    """Base class for all linkx errors."""


class GraphError(LinkxError, ValueError):
    """Invalid graph construction or node reference."""


class ShapeError(LinkxError, ValueError):
    """Operand dimensions do not conform."""


class UndefinedMetricError(LinkxError, ValueError):
    """A metric is mathematically undefined for the given input."""


class NonFiniteError(LinkxError, FloatingPointError):
    """NaN or Inf encountered where finite values are required."""


class CheckpointError(LinkxError, ValueError):
    """Checkpoint does not match the dataset or is malformed."""


class DatasetFormatError(LinkxError, ValueError):
    """Malformed dataset directory contents."""

    def __init__(self, path: str | Path, message: str, line: int | None = None):
        self.path = Path(path)
        self.line = line
        location = f"{self.path}:{line}" if line is not None else f"{self.path}"
        super().__init__(f"{location}: {message}")
