"""Dataset directory reading and writing.

A dataset directory holds four files:

- ``edges.tsv``: ``src<TAB>dst`` per line
- ``labels.tsv``: one class index per line, row i is node i
- ``features.tsv``: D tab-separated floats per line, row i is node i
- ``meta.json``: ``n``, ``directed``, ``num_classes``, ``feature_dim`` and
  optional provenance
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from linkx_core.errors import DatasetFormatError, GraphError
from linkx_core.graph import Dataset, Labels, build_graph

logger = logging.getLogger(__name__)

EDGES_FILE = "edges.tsv"
LABELS_FILE = "labels.tsv"
FEATURES_FILE = "features.tsv"
META_FILE = "meta.json"
DATASET_FILES = (EDGES_FILE, FEATURES_FILE, LABELS_FILE, META_FILE)

_META_FIELDS = ("n", "directed", "num_classes", "feature_dim")


def read_meta(directory: str | Path) -> dict[str, Any]:
    path = Path(directory) / META_FILE
    if not path.exists():
        raise FileNotFoundError(f"Dataset metadata not found: {path}")
    try:
        meta = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DatasetFormatError(path, f"invalid JSON: {e.msg}", e.lineno) from e
    if not isinstance(meta, dict):
        raise DatasetFormatError(path, "expected a JSON object")
    missing = [f for f in _META_FIELDS if f not in meta]
    if missing:
        raise DatasetFormatError(path, f"missing fields {missing}")
    return meta


def _meta_int(meta: dict[str, Any], path: Path, key: str) -> int:
    value = meta[key]
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise DatasetFormatError(path, f"'{key}' must be a non-negative integer, got {value!r}")
    return value


def _parse_rows(path: Path, width: int | None, dtype: type, what: str) -> np.ndarray:
    """Parse a tab-separated file into a 2-D array, naming the first bad line on failure."""
    if not path.exists():
        raise FileNotFoundError(f"Dataset file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    rows = []
    for lineno, line in enumerate(lines, start=1):
        fields = line.split("\t") if line else []
        if width is not None and len(fields) != width:
            raise DatasetFormatError(path, f"expected {width} {what} per line, found {len(fields)}", lineno)
        try:
            rows.append([dtype(f) for f in fields])
        except ValueError:
            raise DatasetFormatError(path, f"cannot parse {line!r} as {what}", lineno) from None
    cols = width if width is not None else 1
    return np.array(rows, dtype=np.int64 if dtype is int else np.float64).reshape(len(rows), cols)


def load_dataset(directory: str | Path, symmetrize: bool = False) -> Dataset:
    """Load and validate a dataset directory.

    Args:
        directory: Dataset directory
        symmetrize: Store every edge in both directions even for directed data

    Raises:
        FileNotFoundError: If a required file is missing
        DatasetFormatError: For malformed contents (message carries file and line)
    """
    directory = Path(directory)
    meta = read_meta(directory)
    meta_path = directory / META_FILE
    n, D, C = (_meta_int(meta, meta_path, key) for key in ("n", "feature_dim", "num_classes"))
    if not isinstance(meta["directed"], bool):
        raise DatasetFormatError(meta_path, f"'directed' must be true or false, got {meta['directed']!r}")
    directed = meta["directed"] and not symmetrize

    edges_path = directory / EDGES_FILE
    edges = _parse_rows(edges_path, 2, int, "node indices")
    bad = np.flatnonzero((edges < 0).any(axis=1) | (edges >= n).any(axis=1))
    if bad.size:
        raise DatasetFormatError(edges_path, f"node index out of range [0, {n})", int(bad[0]) + 1)

    labels_path = directory / LABELS_FILE
    labels = _parse_rows(labels_path, 1, int, "class index").reshape(-1)
    if labels.size != n:
        raise DatasetFormatError(labels_path, f"expected {n} labels, found {labels.size}")
    bad = np.flatnonzero((labels < 0) | (labels >= C))
    if bad.size:
        raise DatasetFormatError(labels_path, f"label {labels[bad[0]]} outside [0, {C})", int(bad[0]) + 1)

    features_path = directory / FEATURES_FILE
    if D == 0 and not features_path.exists():
        features = np.zeros((n, 0))
    else:
        features = _parse_rows(features_path, D, float, "feature values")
    if features.shape[0] != n:
        raise DatasetFormatError(features_path, f"expected {n} feature rows, found {features.shape[0]}")
    bad = np.flatnonzero(~np.isfinite(features).all(axis=1))
    if bad.size:
        raise DatasetFormatError(features_path, "non-finite feature value", int(bad[0]) + 1)

    try:
        graph = build_graph(edges, n, directed=directed)
    except GraphError as e:
        raise DatasetFormatError(edges_path, str(e)) from e
    logger.debug(f"Loaded {directory}: n={n}, |E|={graph.num_edges}, C={C}, D={D}")
    return Dataset(graph=graph, features=np.ascontiguousarray(features.T), labels=Labels(labels, C))


def save_dataset(dataset: Dataset, directory: str | Path, provenance: dict[str, Any] | None = None) -> Path:
    """Write a dataset directory; output bytes depend only on the dataset and provenance."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    g = dataset.graph

    edges = g.edge_list()
    with open(directory / EDGES_FILE, "w", encoding="utf-8", newline="\n") as f:
        if edges.size:
            np.savetxt(f, edges, fmt="%d", delimiter="\t")
    with open(directory / LABELS_FILE, "w", encoding="utf-8", newline="\n") as f:
        np.savetxt(f, dataset.labels.values, fmt="%d")
    with open(directory / FEATURES_FILE, "w", encoding="utf-8", newline="\n") as f:
        if dataset.feature_dim:
            np.savetxt(f, dataset.features.T, fmt="%.17g", delimiter="\t")
        else:
            f.write("\n" * dataset.num_nodes)

    meta: dict[str, Any] = {
        "n": g.n,
        "directed": g.directed,
        "num_classes": dataset.num_classes,
        "feature_dim": dataset.feature_dim,
    }
    if provenance:
        meta["provenance"] = provenance
    (directory / META_FILE).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote dataset to {directory}")
    return directory


def dataset_checksum(directory: str | Path) -> str:
    """SHA-256 over the dataset files (name and bytes, in fixed order)."""
    directory = Path(directory)
    digest = hashlib.sha256()
    for name in DATASET_FILES:
        path = directory / name
        if not path.exists():
            continue
        digest.update(name.encode())
        digest.update(b"\0")
        digest.update(path.read_bytes())
    return digest.hexdigest()
