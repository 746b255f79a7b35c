"""Simple scalable node classifiers.

Gradient models (MLP, LINK, LINKX, concatenation MLP, SGC) share one
interface: ``init_params`` -> ``forward`` -> ``backward`` over a ``Batch`` of
node columns. Parameters are plain ``dict[str, ndarray]``; insertion order is
the documented parameter order used by checkpoints. Label propagation has no
trainable parameters and is exposed as a function.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Any, ClassVar, Literal

import numpy as np
import scipy.sparse as sp

from linkx_core.errors import ShapeError
from linkx_core.graph import Dataset, Graph, adjacency_columns
from linkx_core.kernels import (
    Operand,
    init_uniform,
    linear_backward,
    linear_forward,
    relu,
    relu_backward,
    softmax,
    softmax_xent,
)

logger = logging.getLogger(__name__)

Params = dict[str, np.ndarray]
ModelKind = Literal["mlp", "link", "linkx", "concat-mlp", "labelprop", "sgc"]
Normalization = Literal["sym", "row"]

MODEL_KINDS: tuple[str, ...] = ("mlp", "link", "linkx", "concat-mlp", "labelprop", "sgc")
MINIBATCH_KINDS: tuple[str, ...] = ("mlp", "link", "linkx")


@dataclass(frozen=True, eq=False)
class Batch:
    """Columns of the model inputs for a set of nodes."""

    nodes: np.ndarray
    a_cols: sp.csc_matrix | None
    """n x b adjacency columns (None for feature-only models)."""

    x_cols: np.ndarray
    """D x b feature columns."""


# ============================================================================
# MLP stacks
# ============================================================================


def mlp_init(rng: np.random.Generator, prefix: str, dims: list[int], bias: bool = True) -> Params:
    """Parameters for a chain of linear layers ``dims[0] -> ... -> dims[-1]``."""
    params: Params = {}
    for i, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        params[f"{prefix}.{i}.W"] = init_uniform(rng, (fan_out, fan_in), fan_in)
        if bias:
            params[f"{prefix}.{i}.b"] = init_uniform(rng, (fan_out,), fan_in)
    return params


def _stack_depth(params: Params, prefix: str) -> int:
    depth = 0
    while f"{prefix}.{depth}.W" in params:
        depth += 1
    return depth


def mlp_forward(params: Params, X: Operand, prefix: str = "mlp") -> np.ndarray:
    """Alternating linear/ReLU layers, linear last."""
    out, _ = _mlp_forward_cached(params, X, prefix)
    return out


def _mlp_forward_cached(params: Params, X: Operand, prefix: str) -> tuple[np.ndarray, list[tuple[Operand, np.ndarray]]]:
    depth = _stack_depth(params, prefix)
    if depth == 0:
        raise ShapeError(f"No layers found under '{prefix}'")
    cache: list[tuple[Operand, np.ndarray]] = []
    h: Operand = X
    for i in range(depth):
        z = linear_forward(params[f"{prefix}.{i}.W"], params.get(f"{prefix}.{i}.b"), h)
        cache.append((h, z))
        h = relu(z) if i < depth - 1 else z
    return h, cache  # type: ignore[return-value]


def _mlp_backward(
    params: Params,
    prefix: str,
    cache: list[tuple[Operand, np.ndarray]],
    grad: np.ndarray,
    grads: Params,
    need_input_grad: bool = False,
) -> np.ndarray | None:
    depth = len(cache)
    upstream: np.ndarray | None = grad
    for i in reversed(range(depth)):
        h, z = cache[i]
        assert upstream is not None
        if i < depth - 1:
            upstream = relu_backward(z, upstream)
        dW, db, dX = linear_backward(params[f"{prefix}.{i}.W"], h, upstream, need_input_grad or i > 0)
        grads[f"{prefix}.{i}.W"] = dW
        if f"{prefix}.{i}.b" in params:
            grads[f"{prefix}.{i}.b"] = db
        upstream = dX
    return upstream


# ============================================================================
# Gradient models
# ============================================================================


class GradientModel:
    """Base class for models trained by gradient descent on softmax cross-entropy."""

    kind: ClassVar[str] = ""
    uses_adjacency: ClassVar[bool] = False

    def config(self) -> dict[str, Any]:
        """Architecture description (kind plus constructor arguments)."""
        raise NotImplementedError

    def init_params(self, rng: np.random.Generator) -> Params:
        raise NotImplementedError

    def forward(self, params: Params, batch: Batch) -> tuple[np.ndarray, Any]:
        """Return (C x b logits, cache for backward)."""
        raise NotImplementedError

    def backward(self, params: Params, cache: Any, grad_logits: np.ndarray) -> Params:
        raise NotImplementedError

    def prepare_features(self, dataset: Dataset) -> np.ndarray:
        """Per-node input features (SGC replaces them with propagated ones)."""
        return dataset.features

    def batch(self, dataset: Dataset, features: np.ndarray, nodes: np.ndarray) -> Batch:
        nodes = np.asarray(nodes, dtype=np.int64)
        a_cols = adjacency_columns(dataset.graph, nodes) if self.uses_adjacency else None
        return Batch(nodes=nodes, a_cols=a_cols, x_cols=np.ascontiguousarray(features[:, nodes]))

    def loss_and_grads(self, params: Params, batch: Batch, labels: np.ndarray) -> tuple[float, Params]:
        logits, cache = self.forward(params, batch)
        loss, grad_logits = softmax_xent(logits, labels)
        return loss, self.backward(params, cache, grad_logits)

    def predict_proba(self, params: Params, dataset: Dataset, features: np.ndarray) -> np.ndarray:
        """C x n class probabilities for every node."""
        logits, _ = self.forward(params, self.batch(dataset, features, np.arange(dataset.num_nodes)))
        return softmax(logits)

    def _ordered(self, params: Params, grads: Params) -> Params:
        return {name: grads[name] for name in params}


class MLPModel(GradientModel):
    """Feature-only MLP."""

    kind = "mlp"

    def __init__(self, in_dim: int, hidden: int, num_layers: int, num_classes: int):
        if num_layers < 1:
            raise ValueError(f"MLP needs at least one layer, got {num_layers}")
        self.in_dim, self.hidden, self.num_layers, self.num_classes = in_dim, hidden, num_layers, num_classes

    def config(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "in_dim": self.in_dim,
            "hidden": self.hidden,
            "num_layers": self.num_layers,
            "num_classes": self.num_classes,
        }

    def init_params(self, rng: np.random.Generator) -> Params:
        dims = [self.in_dim] + [self.hidden] * (self.num_layers - 1) + [self.num_classes]
        return mlp_init(rng, "mlp", dims)

    def forward(self, params: Params, batch: Batch) -> tuple[np.ndarray, Any]:
        return _mlp_forward_cached(params, batch.x_cols, "mlp")

    def backward(self, params: Params, cache: Any, grad_logits: np.ndarray) -> Params:
        grads: Params = {}
        _mlp_backward(params, "mlp", cache, grad_logits, grads)
        return self._ordered(params, grads)


def link_forward(W: np.ndarray, A: Graph | sp.spmatrix, nodes: np.ndarray, b: np.ndarray | None = None) -> np.ndarray:
    """LINK logits ``(W A)[:, nodes]``: each node's logit sums W over its neighbors.

    Args:
        W: C x n weights
        A: Graph, or sparse n x n adjacency whose column u marks the in-neighbors of u
        nodes: Nodes to score
        b: Optional class bias
    """
    num_nodes = A.n if isinstance(A, Graph) else A.shape[0]
    if W.shape[1] != num_nodes:
        raise ShapeError(f"LINK weight has {W.shape[1]} columns for {num_nodes} nodes")
    cols = adjacency_columns(A, nodes) if isinstance(A, Graph) else sp.csc_matrix(A)[:, nodes]
    return linear_forward(W, b, cols)


class LinkModel(GradientModel):
    """Logistic regression on adjacency columns."""

    kind = "link"
    uses_adjacency = True

    def __init__(self, num_nodes: int, num_classes: int, bias: bool = False):
        self.num_nodes, self.num_classes, self.bias = num_nodes, num_classes, bias

    def config(self) -> dict[str, Any]:
        return {"kind": self.kind, "num_nodes": self.num_nodes, "num_classes": self.num_classes, "bias": self.bias}

    def init_params(self, rng: np.random.Generator) -> Params:
        return mlp_init(rng, "link", [self.num_nodes, self.num_classes], bias=self.bias)

    def forward(self, params: Params, batch: Batch) -> tuple[np.ndarray, Any]:
        return _mlp_forward_cached(params, batch.a_cols, "link")

    def backward(self, params: Params, cache: Any, grad_logits: np.ndarray) -> Params:
        grads: Params = {}
        _mlp_backward(params, "link", cache, grad_logits, grads)
        return self._ordered(params, grads)


class LinkxModel(GradientModel):
    """Separate adjacency/feature embeddings, linear mixing with skips, final MLP.

    ``logits = MLP_f(relu(W [h_A; h_X] + b + h_A + h_X))`` with
    ``h_A = MLP_A(A_cols)`` and ``h_X = MLP_X(X_cols)``.
    """

    kind = "linkx"
    uses_adjacency = True

    def __init__(
        self,
        num_nodes: int,
        in_dim: int,
        hidden: int,
        num_classes: int,
        final_layers: int = 1,
        a_layers: int = 1,
        x_layers: int = 1,
    ):
        if hidden < 1:
            raise ValueError(f"Hidden dimension must be positive, got {hidden}")
        if min(final_layers, a_layers, x_layers) < 1:
            raise ValueError("Every LINKX MLP needs at least one layer")
        self.num_nodes, self.in_dim, self.hidden, self.num_classes = num_nodes, in_dim, hidden, num_classes
        self.final_layers, self.a_layers, self.x_layers = final_layers, a_layers, x_layers

    def config(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "num_nodes": self.num_nodes,
            "in_dim": self.in_dim,
            "hidden": self.hidden,
            "num_classes": self.num_classes,
            "final_layers": self.final_layers,
            "a_layers": self.a_layers,
            "x_layers": self.x_layers,
        }

    def init_params(self, rng: np.random.Generator) -> Params:
        d = self.hidden
        params = mlp_init(rng, "linkx.A", [self.num_nodes] + [d] * self.a_layers)
        params.update(mlp_init(rng, "linkx.X", [self.in_dim] + [d] * self.x_layers))
        params.update(mlp_init(rng, "linkx.mix", [2 * d, d]))
        params.update(mlp_init(rng, "linkx.F", [d] * self.final_layers + [self.num_classes]))
        return params

    def forward(self, params: Params, batch: Batch) -> tuple[np.ndarray, Any]:
        return linkx_forward_cached(params, batch.a_cols, batch.x_cols)

    def backward(self, params: Params, cache: Any, grad_logits: np.ndarray) -> Params:
        cache_a, cache_x, cat, z, cache_f = cache
        d = self.hidden
        grads: Params = {}
        d_mixed = _mlp_backward(params, "linkx.F", cache_f, grad_logits, grads, need_input_grad=True)
        dz = relu_backward(z, d_mixed)
        dW, db, dcat = linear_backward(params["linkx.mix.0.W"], cat, dz)
        grads["linkx.mix.0.W"], grads["linkx.mix.0.b"] = dW, db
        assert dcat is not None
        _mlp_backward(params, "linkx.A", cache_a, dcat[:d] + dz, grads)
        _mlp_backward(params, "linkx.X", cache_x, dcat[d:] + dz, grads)
        return self._ordered(params, grads)


def linkx_forward_cached(params: Params, a_cols: Operand, x_cols: np.ndarray) -> tuple[np.ndarray, Any]:
    if a_cols.shape[1] != x_cols.shape[1]:
        raise ShapeError(f"Adjacency ({a_cols.shape[1]}) and feature ({x_cols.shape[1]}) batch sizes differ")
    h_a, cache_a = _mlp_forward_cached(params, a_cols, "linkx.A")
    h_x, cache_x = _mlp_forward_cached(params, x_cols, "linkx.X")
    cat = np.vstack([h_a, h_x])
    z = linear_forward(params["linkx.mix.0.W"], params["linkx.mix.0.b"], cat) + h_a + h_x
    logits, cache_f = _mlp_forward_cached(params, relu(z), "linkx.F")
    return logits, (cache_a, cache_x, cat, z, cache_f)


def linkx_forward(params: Params, a_cols: Operand, x_cols: np.ndarray) -> np.ndarray:
    """LINKX logits for the batch whose adjacency and feature columns are given."""
    logits, _ = linkx_forward_cached(params, a_cols, x_cols)
    return logits


def concat_inputs(a_cols: Operand, x_cols: np.ndarray) -> sp.csr_matrix:
    """Vertical concatenation ``[A_cols; X_cols]`` kept sparse."""
    if x_cols.shape[0] == 0:
        return sp.csr_matrix(a_cols)
    return sp.vstack([sp.csr_matrix(a_cols), sp.csr_matrix(x_cols)], format="csr")


def concat_mlp_forward(params: Params, a_cols: Operand, x_cols: np.ndarray) -> np.ndarray:
    """One MLP over the stacked adjacency and feature columns."""
    if a_cols.shape[1] != x_cols.shape[1]:
        raise ShapeError(f"Adjacency ({a_cols.shape[1]}) and feature ({x_cols.shape[1]}) batch sizes differ")
    return mlp_forward(params, concat_inputs(a_cols, x_cols), prefix="concat")


class ConcatMLPModel(GradientModel):
    """Ablation comparator: MLP([A; X]) without separate embeddings."""

    kind = "concat-mlp"
    uses_adjacency = True

    def __init__(self, num_nodes: int, in_dim: int, hidden: int, num_layers: int, num_classes: int):
        if num_layers < 1:
            raise ValueError(f"Concatenation MLP needs at least one layer, got {num_layers}")
        self.num_nodes, self.in_dim, self.hidden = num_nodes, in_dim, hidden
        self.num_layers, self.num_classes = num_layers, num_classes

    def config(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "num_nodes": self.num_nodes,
            "in_dim": self.in_dim,
            "hidden": self.hidden,
            "num_layers": self.num_layers,
            "num_classes": self.num_classes,
        }

    def init_params(self, rng: np.random.Generator) -> Params:
        dims = [self.num_nodes + self.in_dim] + [self.hidden] * (self.num_layers - 1) + [self.num_classes]
        return mlp_init(rng, "concat", dims)

    def forward(self, params: Params, batch: Batch) -> tuple[np.ndarray, Any]:
        return _mlp_forward_cached(params, concat_inputs(batch.a_cols, batch.x_cols), "concat")

    def backward(self, params: Params, cache: Any, grad_logits: np.ndarray) -> Params:
        grads: Params = {}
        _mlp_backward(params, "concat", cache, grad_logits, grads)
        return self._ordered(params, grads)


# ============================================================================
# Propagation
# ============================================================================


def normalized_adjacency(g: Graph, normalization: Normalization = "sym", self_loops: bool = False) -> sp.csr_matrix:
    """``D^-1/2 A D^-1/2`` (sym) or ``D^-1 A`` (row); zero-degree rows stay zero."""
    A = g.adjacency
    if self_loops:
        A = (A + sp.identity(g.n, format="csr")).tocsr()
    deg = np.asarray(A.sum(axis=1)).ravel()
    with np.errstate(divide="ignore"):
        if normalization == "sym":
            scale = np.where(deg > 0, 1.0 / np.sqrt(deg), 0.0)
            return (sp.diags(scale) @ A @ sp.diags(scale)).tocsr()
        if normalization == "row":
            return (sp.diags(np.where(deg > 0, 1.0 / deg, 0.0)) @ A).tocsr()
    raise ValueError(f"Unknown normalization '{normalization}'")


def sgc_propagate(g: Graph, X: np.ndarray, hops: int) -> np.ndarray:
    """``S^hops X`` with S the self-looped symmetric normalized adjacency (X is D x n)."""
    if hops not in (1, 2):
        raise ValueError(f"SGC supports 1 or 2 hops, got {hops}")
    if X.shape[1] != g.n:
        raise ShapeError(f"Feature columns ({X.shape[1]}) must equal node count ({g.n})")
    S = normalized_adjacency(g, "sym", self_loops=True)
    P = np.ascontiguousarray(X.T)
    for _ in range(hops):
        P = np.asarray(S @ P)
    return np.ascontiguousarray(P.T)


def sgc_logits(g: Graph, X: np.ndarray, W: np.ndarray, hops: int, b: np.ndarray | None = None) -> np.ndarray:
    """Logistic-regression logits on propagated features, C x n."""
    return linear_forward(W, b, sgc_propagate(g, X, hops))


class SGCModel(GradientModel):
    """Linear classifier on features propagated once before training."""

    kind = "sgc"

    def __init__(self, in_dim: int, num_classes: int, hops: int = 1):
        if hops not in (1, 2):
            raise ValueError(f"SGC supports 1 or 2 hops, got {hops}")
        self.in_dim, self.num_classes, self.hops = in_dim, num_classes, hops

    def config(self) -> dict[str, Any]:
        return {"kind": self.kind, "in_dim": self.in_dim, "num_classes": self.num_classes, "hops": self.hops}

    def prepare_features(self, dataset: Dataset) -> np.ndarray:
        return sgc_propagate(dataset.graph, dataset.features, self.hops)

    def init_params(self, rng: np.random.Generator) -> Params:
        return mlp_init(rng, "sgc", [self.in_dim, self.num_classes])

    def forward(self, params: Params, batch: Batch) -> tuple[np.ndarray, Any]:
        return _mlp_forward_cached(params, batch.x_cols, "sgc")

    def backward(self, params: Params, cache: Any, grad_logits: np.ndarray) -> Params:
        grads: Params = {}
        _mlp_backward(params, "sgc", cache, grad_logits, grads)
        return self._ordered(params, grads)


@dataclass(frozen=True)
class PropagationConfig:
    """Label propagation settings."""

    alpha: float = 0.5
    """Weight on propagated labels; 1 - alpha pulls back to the seeds."""

    hops: int = 1
    iterations: int = 50
    normalization: Normalization = "sym"
    symmetrize: bool = True
    """Propagate over the undirected version of the graph."""

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.hops not in (1, 2):
            raise ValueError(f"Label propagation supports 1 or 2 hops, got {self.hops}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be at least 1, got {self.iterations}")
        if self.normalization not in ("sym", "row"):
            raise ValueError(f"Unknown normalization '{self.normalization}'")


def _seed_matrix(partial: np.ndarray, num_classes: int) -> np.ndarray:
    partial = np.asarray(partial, dtype=np.int64)
    labeled = partial >= 0
    if not labeled.any():
        raise ValueError("Label propagation needs at least one labeled node")
    if partial.max() >= num_classes:
        raise ValueError(f"Partial labels must lie in [-1, {num_classes})")
    Y0 = np.zeros((partial.size, num_classes))
    Y0[np.flatnonzero(labeled), partial[labeled]] = 1.0
    return Y0


def _propagate(g: Graph, partial: np.ndarray, num_classes: int, cfg: PropagationConfig) -> Iterator[np.ndarray]:
    graph = g.symmetrized() if cfg.symmetrize else g
    if len(partial) != graph.n:
        raise ShapeError(f"Partial labels ({len(partial)}) must cover all {graph.n} nodes")
    S = normalized_adjacency(graph, cfg.normalization)
    Y0 = _seed_matrix(partial, num_classes)
    isolated = graph.degrees == 0
    Y = Y0.copy()
    for _ in range(cfg.iterations):
        Z = Y
        for _ in range(cfg.hops):
            Z = np.asarray(S @ Z)
        Y = cfg.alpha * Z + (1.0 - cfg.alpha) * Y0
        Y[isolated] = Y0[isolated]
        yield Y


def label_propagation(g: Graph, partial: np.ndarray, num_classes: int, cfg: PropagationConfig) -> np.ndarray:
    """Residual label propagation ``Y <- alpha S^hops Y + (1 - alpha) Y0``.

    Args:
        g: Graph
        partial: Length-n labels with -1 for unlabeled nodes
        num_classes: C
        cfg: Propagation settings

    Returns:
        C x n soft labels; columns sum to 1 (uniform where nothing arrived)
    """
    Y = None
    for Y in _propagate(g, partial, num_classes, cfg):
        pass
    assert Y is not None
    sums = Y.sum(axis=1, keepdims=True)
    soft = np.where(sums > 0, Y / np.where(sums > 0, sums, 1.0), 1.0 / num_classes)
    return np.ascontiguousarray(soft.T)


def propagation_residuals(g: Graph, partial: np.ndarray, num_classes: int, cfg: PropagationConfig) -> list[float]:
    """Max-norm distance between successive label propagation iterates."""
    out, prev = [], _seed_matrix(partial, num_classes)
    for Y in _propagate(g, partial, num_classes, cfg):
        out.append(float(np.abs(Y - prev).max()))
        prev = Y
    return out


# ============================================================================
# Factory
# ============================================================================


def build_model(kind: str, dataset: Dataset, hyper: dict[str, Any]) -> GradientModel:
    """Instantiate a gradient model for ``dataset`` from grid hyperparameters."""
    n, D, C = dataset.num_nodes, dataset.feature_dim, dataset.num_classes
    if kind == "mlp":
        return MLPModel(D, int(hyper.get("hidden", 64)), int(hyper.get("layers", 2)), C)
    if kind == "link":
        return LinkModel(n, C, bias=bool(hyper.get("bias", False)))
    if kind == "linkx":
        return LinkxModel(
            n,
            D,
            int(hyper.get("hidden", 32)),
            C,
            final_layers=int(hyper.get("final_layers", 1)),
            a_layers=int(hyper.get("a_layers", 1)),
            x_layers=int(hyper.get("x_layers", 1)),
        )
    if kind == "concat-mlp":
        return ConcatMLPModel(n, D, int(hyper.get("hidden", 32)), int(hyper.get("layers", 1)), C)
    if kind == "sgc":
        return SGCModel(D, C, hops=int(hyper.get("hops", 1)))
    raise ValueError(f"'{kind}' is not a gradient model; expected one of {[k for k in MODEL_KINDS if k != 'labelprop']}")


def model_from_config(config: dict[str, Any]) -> GradientModel:
    """Rebuild a model from ``GradientModel.config()`` output."""
    args = {k: v for k, v in config.items() if k != "kind"}
    classes: dict[str, type[GradientModel]] = {
        "mlp": MLPModel,
        "link": LinkModel,
        "linkx": LinkxModel,
        "concat-mlp": ConcatMLPModel,
        "sgc": SGCModel,
    }
    try:
        cls = classes[config["kind"]]
    except KeyError as e:
        raise ValueError(f"Unknown model kind in config: {config.get('kind')}") from e
    return cls(**args)  # type: ignore[call-arg]
