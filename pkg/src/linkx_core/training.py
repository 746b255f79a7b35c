"""Training loops, grid search and model selection.

A run trains one model kind on every split. For each split every grid point
is trained for ``cfg.epochs`` epochs; after each epoch the train and val
metrics are recorded and the parameters with the best val metric are kept.
The test metric is computed once per split, after selection.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from linkx_core.config import TrainConfig
from linkx_core.errors import NonFiniteError, UndefinedMetricError
from linkx_core.evaluation import Split, make_splits, score_nodes
from linkx_core.graph import Dataset
from linkx_core.kernels import check_finite, softmax
from linkx_core.models import (
    MINIBATCH_KINDS,
    MODEL_KINDS,
    Batch,
    GradientModel,
    Params,
    PropagationConfig,
    build_model,
    label_propagation,
    model_from_config,
)
from linkx_core.notifier import NoOpNotifier, RunNotifier
from linkx_core.optim import OptimizerState, adamw_step
from linkx_core.rng import Stream, make_rng

logger = logging.getLogger(__name__)

FULL_GRAPH_ONLY = {
    "labelprop": "label propagation requires full-graph propagation",
    "sgc": "SGC requires full-graph propagation",
    "concat-mlp": "concat-mlp supports full-batch training only",
}


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    train: float
    val: float


@dataclass
class GridPointResult:
    """Outcome of training one hyperparameter setting on one split."""

    index: int
    hyper: dict[str, Any]
    status: str = "ok"
    """"ok" or "failed"."""

    error: str | None = None
    best_epoch: int | None = None
    best_val: float | None = None
    best_train: float | None = None
    curve: list[EpochRecord] = field(default_factory=list)
    params: Params | None = field(default=None, repr=False)
    architecture: dict[str, Any] | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "hyper": self.hyper,
            "status": self.status,
            "error": self.error,
            "best_epoch": self.best_epoch,
            "best_val": self.best_val,
            "curve": {
                "loss": [r.loss for r in self.curve],
                "train": [r.train for r in self.curve],
                "val": [r.val for r in self.curve],
            },
        }


@dataclass
class SplitResult:
    """Selected model and its metrics for one split."""

    split: Split
    metric: str
    grid: list[GridPointResult]
    best_index: int
    test: float
    wall_time: float = 0.0

    @property
    def best(self) -> GridPointResult:
        return self.grid[self.best_index]

    @property
    def params(self) -> Params:
        return self.best.params or {}

    @property
    def architecture(self) -> dict[str, Any]:
        return self.best.architecture or {}

    def as_dict(self) -> dict[str, Any]:
        best = self.best
        return {
            "split_index": self.split.index,
            "split_seed": self.split.seed,
            "sizes": {"train": int(self.split.train.size), "val": int(self.split.val.size), "test": int(self.split.test.size)},
            "best_grid_index": self.best_index,
            "best_hyper": best.hyper,
            "best_epoch": best.best_epoch,
            "train": best.best_train,
            "val": best.best_val,
            "test": self.test,
            "grid": [g.as_dict() for g in self.grid],
        }


@dataclass
class ExperimentResult:
    """Per-split results plus mean/std of the test metric."""

    model: str
    batch: str
    metric: str
    seed: int
    splits: list[SplitResult]

    @property
    def test_scores(self) -> np.ndarray:
        return np.array([s.test for s in self.splits])

    @property
    def mean(self) -> float:
        return float(self.test_scores.mean())

    @property
    def std(self) -> float:
        return float(self.test_scores.std())

    def as_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "batch": self.batch,
            "metric": self.metric,
            "seed": self.seed,
            "splits": [s.as_dict() for s in self.splits],
            "summary": {"mean": self.mean, "std": self.std, "test": self.test_scores.tolist()},
        }

    def timings(self) -> dict[str, Any]:
        return {"splits": [s.wall_time for s in self.splits], "total": float(sum(s.wall_time for s in self.splits))}


def check_batch_mode(model_kind: str, batch: str) -> None:
    """Reject model/batch combinations that cannot run.

    Raises:
        ValueError: For unknown models, or minibatching a full-graph model
    """
    if model_kind not in MODEL_KINDS:
        raise ValueError(f"Unknown model '{model_kind}'; expected one of {list(MODEL_KINDS)}")
    if batch == "iid" and model_kind not in MINIBATCH_KINDS:
        raise ValueError(FULL_GRAPH_ONLY[model_kind])


def minibatch_size(n_train: int, fraction: float) -> int:
    """ceil(n_train * fraction), clamped to [1, n_train]."""
    return min(max(math.ceil(n_train * fraction), 1), n_train)


def _copy(params: Params) -> Params:
    return {k: v.copy() for k, v in params.items()}


def _train_grid_point(
    model_kind: str,
    dataset: Dataset,
    split: Split,
    cfg: TrainConfig,
    index: int,
    hyper: dict[str, Any],
    notifier: RunNotifier,
) -> GridPointResult:
    result = GridPointResult(index=index, hyper=hyper)
    labels = dataset.labels.values
    try:
        model: GradientModel = build_model(model_kind, dataset, {"hops": cfg.hops, **hyper})
        features = model.prepare_features(dataset)
        opt_cfg = cfg.optimizer(hyper)
        params = model.init_params(make_rng(cfg.seed, Stream.INIT, split.index, index))
        state = OptimizerState.zeros_like(params)
        result.architecture = model.config()

        eval_batch = model.batch(dataset, features, np.arange(dataset.num_nodes))
        full_batch: Batch | None = None
        batch_rng = None
        size = split.train.size
        if cfg.batch == "full":
            full_batch = model.batch(dataset, features, split.train)
        else:
            batch_rng = make_rng(cfg.seed, Stream.BATCH, split.index, index)
            size = minibatch_size(split.train.size, cfg.batch_fraction)
        steps = 1 if cfg.batch == "full" else cfg.steps_per_epoch

        for epoch in range(1, cfg.epochs + 1):
            losses = []
            for _ in range(steps):
                if full_batch is not None:
                    batch = full_batch
                else:
                    assert batch_rng is not None
                    nodes = np.sort(batch_rng.choice(split.train, size=size, replace=False))
                    batch = model.batch(dataset, features, nodes)
                loss, grads = model.loss_and_grads(params, batch, labels[batch.nodes])
                check_finite(f"loss at epoch {epoch}", loss)
                adamw_step(params, grads, state, opt_cfg)
                losses.append(loss)

            logits, _ = model.forward(params, eval_batch)
            check_finite(f"logits at epoch {epoch}", logits)
            probs = softmax(logits)
            train_score = score_nodes(cfg.metric, probs, labels, split.train)
            val_score = score_nodes(cfg.metric, probs, labels, split.val)
            record = EpochRecord(epoch=epoch, loss=float(np.mean(losses)), train=train_score, val=val_score)
            result.curve.append(record)
            notifier.epoch(index, epoch, record.loss, train_score, val_score)

            if result.best_val is None or val_score > result.best_val:
                result.best_val, result.best_train, result.best_epoch = val_score, train_score, epoch
                result.params = _copy(params)
    except (NonFiniteError, UndefinedMetricError) as e:
        result.status, result.error, result.params = "failed", str(e), None
        logger.warning(f"Grid point {index} {hyper} failed on split {split.index}: {e}")

    notifier.grid_point_done(index, hyper, result.status, result.best_val)
    return result


def _labelprop_grid_point(
    dataset: Dataset, split: Split, cfg: TrainConfig, index: int, hyper: dict[str, Any], notifier: RunNotifier
) -> GridPointResult:
    prop = cfg.propagation(float(hyper.get("alpha", 0.5)))
    soft = label_propagation(dataset.graph, split.partial_labels(dataset.labels.values), dataset.num_classes, prop)
    labels = dataset.labels.values
    result = GridPointResult(
        index=index,
        hyper=hyper,
        best_epoch=0,
        params={},
        architecture={"kind": "labelprop", "num_classes": dataset.num_classes, **asdict(prop)},
    )
    try:
        result.best_train = score_nodes(cfg.metric, soft, labels, split.train)
        result.best_val = score_nodes(cfg.metric, soft, labels, split.val)
    except UndefinedMetricError as e:
        result.status, result.error, result.params = "failed", str(e), None
        logger.warning(f"Grid point {index} {hyper} failed on split {split.index}: {e}")
    notifier.grid_point_done(index, hyper, result.status, result.best_val)
    return result


def predict_proba(architecture: dict[str, Any], params: Params, dataset: Dataset, split: Split) -> np.ndarray:
    """C x n probabilities of a selected model.

    Label propagation is rerun from the split's training labels.
    """
    if architecture["kind"] == "labelprop":
        prop = PropagationConfig(**{k: v for k, v in architecture.items() if k not in ("kind", "num_classes")})
        return label_propagation(
            dataset.graph, split.partial_labels(dataset.labels.values), architecture["num_classes"], prop
        )
    model = model_from_config(architecture)
    features = model.prepare_features(dataset)
    return model.predict_proba(params, dataset, features)


def train_split(
    model_kind: str,
    dataset: Dataset,
    split: Split,
    cfg: TrainConfig,
    notifier: RunNotifier | None = None,
    workers: int = 1,
) -> SplitResult:
    """Grid-search one split and score the selected model on its test nodes.

    Grid points run in a thread pool when ``workers > 1``; results are kept
    in grid order so selection does not depend on scheduling.

    Raises:
        ValueError: If the model cannot run in ``cfg.batch`` mode or every grid point failed
    """
    check_batch_mode(model_kind, cfg.batch)
    notifier = notifier or NoOpNotifier()
    points = cfg.grid_points(model_kind) or [{}]

    def run(item: tuple[int, dict[str, Any]]) -> GridPointResult:
        index, hyper = item
        if model_kind == "labelprop":
            return _labelprop_grid_point(dataset, split, cfg, index, hyper, notifier)
        return _train_grid_point(model_kind, dataset, split, cfg, index, hyper, notifier)

    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            grid = list(pool.map(run, enumerate(points)))
    else:
        grid = [run(item) for item in enumerate(points)]

    best_index = None
    for g in grid:
        if g.status != "ok" or g.best_val is None:
            continue
        if best_index is None or g.best_val > grid[best_index].best_val:  # type: ignore[operator]
            best_index = g.index
    if best_index is None:
        raise ValueError(f"All {len(grid)} grid points failed for {model_kind} on split {split.index}")

    best = grid[best_index]
    assert best.architecture is not None
    probs = predict_proba(best.architecture, best.params or {}, dataset, split)
    test = score_nodes(cfg.metric, probs, dataset.labels.values, split.test)
    notifier.info(f"Split {split.index}: selected grid point {best_index} {best.hyper}, val {best.best_val:.4f}, test {test:.4f}")
    return SplitResult(split=split, metric=cfg.metric, grid=grid, best_index=best_index, test=test)


def train_full_batch(
    model_kind: str,
    dataset: Dataset,
    split: Split,
    cfg: TrainConfig,
    notifier: RunNotifier | None = None,
    workers: int = 1,
) -> SplitResult:
    """Full-batch training: one optimizer step over all training nodes per epoch."""
    if cfg.batch != "full":
        cfg = cfg.with_overrides(batch="full")
    return train_split(model_kind, dataset, split, cfg, notifier, workers)


def train_minibatch(
    model_kind: str,
    dataset: Dataset,
    split: Split,
    cfg: TrainConfig,
    notifier: RunNotifier | None = None,
    workers: int = 1,
) -> SplitResult:
    """i.i.d. node minibatching.

    Each step samples ``ceil(n_train * batch_fraction)`` distinct training
    nodes and slices their adjacency and feature columns.
    """
    if cfg.batch != "iid":
        cfg = cfg.with_overrides(batch="iid")
    return train_split(model_kind, dataset, split, cfg, notifier, workers)


def run_experiment(
    model_kind: str,
    dataset: Dataset,
    cfg: TrainConfig,
    notifier: RunNotifier | None = None,
    workers: int = 1,
) -> ExperimentResult:
    """Train and select on ``cfg.splits`` seeded splits."""
    check_batch_mode(model_kind, cfg.batch)
    notifier = notifier or NoOpNotifier()
    results = []
    for split in make_splits(dataset.num_nodes, cfg.seed, count=cfg.splits):
        start = time.perf_counter()
        result = train_split(model_kind, dataset, split, cfg, notifier, workers)
        result.wall_time = time.perf_counter() - start
        results.append(result)
    experiment = ExperimentResult(model=model_kind, batch=cfg.batch, metric=cfg.metric, seed=cfg.seed, splits=results)
    notifier.info(f"{model_kind}: test {cfg.metric} {experiment.mean:.4f} +- {experiment.std:.4f} over {len(results)} splits")
    return experiment
