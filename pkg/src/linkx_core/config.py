"""Training configuration parsing."""

import itertools
import logging
import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Literal

try:
    import tomllib
except ImportError:
    import tomli as tomllib  # type: ignore

from linkx_core.evaluation import MetricName
from linkx_core.models import MODEL_KINDS, Normalization, PropagationConfig
from linkx_core.optim import AdamWConfig

logger = logging.getLogger(__name__)

WORKERS_ENV = "LINKX_WORKERS"

BatchPolicy = Literal["full", "iid"]

# Hyperparameter grids searched for each model kind
DEFAULT_GRIDS: dict[str, dict[str, list[Any]]] = {
    "mlp": {"hidden": [16, 32, 64, 128, 256], "layers": [2, 3]},
    "link": {"weight_decay": [0.001, 0.01, 0.1]},
    "linkx": {"hidden": [16, 32, 128, 256], "final_layers": [1, 2, 3]},
    "concat-mlp": {"hidden": [16, 32, 128, 256], "layers": [1, 2, 3]},
    "labelprop": {"alpha": [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99]},
    "sgc": {"weight_decay": [0.001, 0.01, 0.1]},
}


@dataclass
class TrainConfig:
    """Everything that controls a training run besides the dataset."""

    lr: float = 0.01
    weight_decay: float = 0.001
    epochs: int = 500
    batch: BatchPolicy = "full"
    batch_fraction: float = 0.1
    """Minibatch size as a fraction of the training set."""

    steps_per_epoch: int = 1
    """Optimizer steps per epoch in minibatch mode."""

    metric: MetricName = "accuracy"
    splits: int = 5
    seed: int = 0
    hops: int = 1
    """1- or 2-hop variant of label propagation and SGC."""

    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    propagation_iterations: int = 50
    propagation_normalization: Normalization = "sym"
    propagation_symmetrize: bool = True
    grids: dict[str, dict[str, list[Any]]] = field(default_factory=lambda: {k: dict(v) for k, v in DEFAULT_GRIDS.items()})

    def __post_init__(self) -> None:
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be at least 1, got {self.epochs}")
        if self.batch not in ("full", "iid"):
            raise ValueError(f"batch must be 'full' or 'iid', got '{self.batch}'")
        if not 0.0 < self.batch_fraction <= 1.0:
            raise ValueError(f"batch_fraction must lie in (0, 1], got {self.batch_fraction}")
        if self.steps_per_epoch < 1:
            raise ValueError(f"steps_per_epoch must be at least 1, got {self.steps_per_epoch}")
        if self.metric not in ("accuracy", "rocauc"):
            raise ValueError(f"metric must be 'accuracy' or 'rocauc', got '{self.metric}'")
        if self.hops not in (1, 2):
            raise ValueError(f"hops must be 1 or 2, got {self.hops}")
        unknown = set(self.grids) - set(MODEL_KINDS)
        if unknown:
            raise ValueError(f"Grids given for unknown models: {sorted(unknown)}")

    def optimizer(self, hyper: dict[str, Any] | None = None) -> AdamWConfig:
        """AdamW constants, with lr/weight_decay overridden by a grid point."""
        hyper = hyper or {}
        return AdamWConfig(
            lr=float(hyper.get("lr", self.lr)),
            weight_decay=float(hyper.get("weight_decay", self.weight_decay)),
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.eps,
        )

    def propagation(self, alpha: float) -> PropagationConfig:
        return PropagationConfig(
            alpha=alpha,
            hops=self.hops,
            iterations=self.propagation_iterations,
            normalization=self.propagation_normalization,
            symmetrize=self.propagation_symmetrize,
        )

    def grid_points(self, kind: str) -> list[dict[str, Any]]:
        """Cartesian product of the model's grid, keys varied in sorted order.

        The last sorted key varies fastest. Grid indices therefore do not
        depend on how the grid table was written or serialized.
        """
        grid = self.grids.get(kind, {})
        keys = sorted(grid)
        return [dict(zip(keys, values)) for values in itertools.product(*(grid[k] for k in keys))]

    def with_overrides(self, **changes: Any) -> "TrainConfig":
        """Copy with the non-None keyword arguments applied."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


_TRAIN_KEYS = {"lr", "weight_decay", "epochs", "batch", "batch_fraction", "steps_per_epoch", "metric", "splits", "hops"}
_OPTIM_KEYS = {"beta1", "beta2", "eps"}
_PROP_KEYS = {"iterations", "normalization", "symmetrize"}


def load_train_config(path: str | Path) -> TrainConfig:
    """Load a TrainConfig from TOML.

    Missing sections and keys keep their defaults; a ``[grid.<model>]``
    table replaces that model's default grid entirely.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the TOML cannot be parsed or holds unknown keys
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}\nRun 'linkx init-config' to create a default config.")

    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except Exception as e:
        raise ValueError(f"Failed to parse config file {path}: {e}") from e

    kwargs: dict[str, Any] = {}

    train = raw.get("train", {})
    unknown = set(train) - _TRAIN_KEYS
    if unknown:
        raise ValueError(f"Unknown keys in [train] of {path}: {sorted(unknown)}")
    kwargs.update(train)

    optim = raw.get("optimizer", {})
    unknown = set(optim) - _OPTIM_KEYS
    if unknown:
        raise ValueError(f"Unknown keys in [optimizer] of {path}: {sorted(unknown)}")
    kwargs.update(optim)

    prop = raw.get("propagation", {})
    unknown = set(prop) - _PROP_KEYS
    if unknown:
        raise ValueError(f"Unknown keys in [propagation] of {path}: {sorted(unknown)}")
    for key, value in prop.items():
        kwargs[f"propagation_{key}"] = value

    grids = {k: dict(v) for k, v in DEFAULT_GRIDS.items()}
    for kind, grid in raw.get("grid", {}).items():
        if kind not in MODEL_KINDS:
            raise ValueError(f"Unknown model '{kind}' in [grid] of {path}")
        grids[kind] = {key: list(values) if isinstance(values, list) else [values] for key, values in grid.items()}
    kwargs["grids"] = grids

    cfg = TrainConfig(**kwargs)
    logger.debug(f"Loaded training config from {path}")
    return cfg


def resolve_workers() -> int:
    """Grid-point worker count from ``LINKX_WORKERS`` (default 1)."""
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        workers = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {WORKERS_ENV}={raw!r}")
        return 1
    return max(workers, 1)
