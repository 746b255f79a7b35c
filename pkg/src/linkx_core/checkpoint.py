"""Model checkpoints: ``meta.json`` plus a flat ``params.bin``.

``params.bin`` holds every parameter as little-endian float64, concatenated
in the model's parameter order with each array in C order. ``meta.json``
lists the names and shapes in that order alongside the architecture and the
provenance of the recorded test metric.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from linkx_core.errors import CheckpointError
from linkx_core.evaluation import make_splits, score_nodes
from linkx_core.graph import Dataset
from linkx_core.models import Params
from linkx_core.training import predict_proba

logger = logging.getLogger(__name__)

META_FILE = "meta.json"
PARAMS_FILE = "params.bin"
FORMAT_VERSION = 1


@dataclass
class Checkpoint:
    architecture: dict[str, Any]
    params: Params
    seed: int
    split_index: int
    split_count: int
    metric: str
    test: float
    dataset_checksum: str
    hyper: dict[str, Any] = field(default_factory=dict)
    symmetrize: bool = False
    """Whether the training graph was symmetrized on load."""


def save_checkpoint(ckpt: Checkpoint, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    blob = b"".join(np.ascontiguousarray(p, dtype="<f8").tobytes() for p in ckpt.params.values())
    (directory / PARAMS_FILE).write_bytes(blob)
    meta = {
        "format_version": FORMAT_VERSION,
        "architecture": ckpt.architecture,
        "params": [{"name": k, "shape": list(v.shape)} for k, v in ckpt.params.items()],
        "seed": ckpt.seed,
        "split_index": ckpt.split_index,
        "split_count": ckpt.split_count,
        "metric": ckpt.metric,
        "test": ckpt.test,
        "dataset_checksum": ckpt.dataset_checksum,
        "hyper": ckpt.hyper,
        "symmetrize": ckpt.symmetrize,
    }
    (directory / META_FILE).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Saved checkpoint to {directory}")
    return directory


def load_checkpoint(directory: str | Path) -> Checkpoint:
    """Read a checkpoint directory.

    Raises:
        FileNotFoundError: If meta.json or params.bin is missing
        CheckpointError: If the metadata is malformed or the byte count is wrong
    """
    directory = Path(directory)
    meta_path, params_path = directory / META_FILE, directory / PARAMS_FILE
    for path in (meta_path, params_path):
        if not path.exists():
            raise FileNotFoundError(f"Checkpoint file not found: {path}")
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        specs = [(entry["name"], tuple(int(s) for s in entry["shape"])) for entry in meta["params"]]
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise CheckpointError(f"Malformed checkpoint metadata {meta_path}: {e}") from e

    flat = np.frombuffer(params_path.read_bytes(), dtype="<f8")
    expected = sum(int(np.prod(shape)) for _, shape in specs)
    if flat.size != expected:
        raise CheckpointError(f"{params_path} holds {flat.size} values, metadata expects {expected}")

    params: Params = {}
    offset = 0
    for name, shape in specs:
        size = int(np.prod(shape))
        params[name] = flat[offset : offset + size].astype(np.float64).reshape(shape)
        offset += size

    try:
        return Checkpoint(
            architecture=meta["architecture"],
            params=params,
            seed=int(meta["seed"]),
            split_index=int(meta["split_index"]),
            split_count=int(meta["split_count"]),
            metric=meta["metric"],
            test=float(meta["test"]),
            dataset_checksum=meta["dataset_checksum"],
            hyper=meta.get("hyper", {}),
            symmetrize=bool(meta.get("symmetrize", False)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"Malformed checkpoint metadata {meta_path}: {e}") from e


def check_dimensions(architecture: dict[str, Any], dataset: Dataset) -> None:
    """Raise CheckpointError if the architecture was built for other dimensions."""
    expected = {"num_nodes": dataset.num_nodes, "in_dim": dataset.feature_dim, "num_classes": dataset.num_classes}
    for key, actual in expected.items():
        if key in architecture and int(architecture[key]) != actual:
            raise CheckpointError(f"Dimension mismatch: checkpoint has {key}={architecture[key]}, dataset has {actual}")


def evaluate_checkpoint(ckpt: Checkpoint, dataset: Dataset, checksum: str, split_seed: int | None = None) -> dict[str, Any]:
    """Recompute the test metric of a checkpoint on a dataset.

    Args:
        ckpt: Loaded checkpoint
        dataset: Dataset the checkpoint was trained on
        checksum: ``dataset_checksum`` of the dataset directory
        split_seed: Seed for the split (defaults to the training seed)

    Returns:
        Metrics dict with ``matches_recorded`` and ``split_matches`` flags

    Raises:
        CheckpointError: On dimension or checksum mismatch
    """
    check_dimensions(ckpt.architecture, dataset)
    if checksum != ckpt.dataset_checksum:
        raise CheckpointError(f"Dataset checksum {checksum[:12]} does not match checkpoint ({ckpt.dataset_checksum[:12]})")

    seed = ckpt.seed if split_seed is None else split_seed
    split = make_splits(dataset.num_nodes, seed, count=max(ckpt.split_count, ckpt.split_index + 1))[ckpt.split_index]
    probs = predict_proba(ckpt.architecture, ckpt.params, dataset, split)
    test = score_nodes(ckpt.metric, probs, dataset.labels.values, split.test)  # type: ignore[arg-type]
    split_matches = seed == ckpt.seed
    if not split_matches:
        logger.warning(f"Split seed {seed} differs from training seed {ckpt.seed}; test metric is not comparable")
    return {
        "model": ckpt.architecture.get("kind"),
        "metric": ckpt.metric,
        "split_index": ckpt.split_index,
        "split_seed": seed,
        "test": test,
        "recorded_test": ckpt.test,
        "matches_recorded": test == ckpt.test,
        "split_matches": split_matches,
    }
