"""Dense/sparse kernels and closed-form layer gradients.

Matrices follow the column-per-sample convention: a batch of b nodes with
D features is a D x b array, and a linear layer maps ``in x b`` to ``out x b``.
Sparse operands are scipy CSR/CSC matrices; products with them cost
O(nnz * k) through scipy's sparse-dense kernels.
"""

import logging
from collections.abc import Callable
from typing import Union

import numpy as np
import scipy.sparse as sp

from linkx_core.errors import NonFiniteError, ShapeError

logger = logging.getLogger(__name__)

SparseMatrix = Union[sp.csr_matrix, sp.csc_matrix]
Operand = Union[np.ndarray, SparseMatrix]
Point = Union[np.ndarray, dict[str, np.ndarray]]


def check_finite(name: str, value: np.ndarray | float) -> None:
    """Raise NonFiniteError if ``value`` holds NaN or Inf."""
    if not np.all(np.isfinite(value)):
        raise NonFiniteError(f"Non-finite values in {name}")


def spmm(S: SparseMatrix, B: np.ndarray) -> np.ndarray:
    """Sparse x dense product ``S @ B`` as a dense array.

    Raises:
        ShapeError: If inner dimensions differ
    """
    if S.shape[1] != B.shape[0]:
        raise ShapeError(f"spmm inner dimensions differ: {S.shape} @ {B.shape}")
    return np.asarray(S @ B)


def linear_forward(W: np.ndarray, b: np.ndarray | None, X: Operand) -> np.ndarray:
    """``W X + b`` with the bias broadcast over columns.

    ``X`` may be sparse, in which case the product runs through ``spmm`` on
    the transposed operand and never densifies X.
    """
    if W.shape[1] != X.shape[0]:
        raise ShapeError(f"Linear layer expects {W.shape[1]} input rows, got {X.shape[0]}")
    if b is not None and b.shape != (W.shape[0],):
        raise ShapeError(f"Bias shape {b.shape} does not match {W.shape[0]} outputs")

    out = spmm(X.T.tocsr(), W.T).T if sp.issparse(X) else W @ X
    if b is not None:
        out = out + b[:, None]
    return np.ascontiguousarray(out)


def linear_backward(
    W: np.ndarray, X: Operand, grad_out: np.ndarray, need_input_grad: bool = True
) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    """Gradients of a linear layer.

    Returns:
        (dW, db, dX); dX is None for sparse inputs or when not requested
    """
    if sp.issparse(X):
        dW = spmm(X.tocsr(), grad_out.T).T
        dX = None
    else:
        dW = grad_out @ X.T
        dX = W.T @ grad_out if need_input_grad else None
    return np.ascontiguousarray(dW), grad_out.sum(axis=1), dX


def relu(X: np.ndarray) -> np.ndarray:
    return np.maximum(X, 0.0)


def relu_backward(X: np.ndarray, upstream: np.ndarray) -> np.ndarray:
    """Mask ``upstream`` where the pre-activation is not positive."""
    return np.where(X > 0, upstream, 0.0)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Column-wise softmax."""
    shifted = logits - logits.max(axis=0, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=0, keepdims=True)


def softmax_xent(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean cross-entropy of column-wise softmax and its gradient.

    Args:
        logits: C x b scores
        labels: Length-b class indices in [0, C)

    Returns:
        (loss, d loss / d logits)
    """
    labels = np.asarray(labels, dtype=np.int64)
    C, batch = logits.shape
    if labels.shape != (batch,):
        raise ShapeError(f"Expected {batch} labels, got {labels.shape}")
    if batch and (labels.min() < 0 or labels.max() >= C):
        raise ShapeError(f"Labels must lie in [0, {C})")

    shifted = logits - logits.max(axis=0, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=0, keepdims=True))
    log_probs = shifted - log_norm
    cols = np.arange(batch)
    loss = -float(np.mean(log_probs[labels, cols]))

    grad = np.exp(log_probs)
    grad[labels, cols] -= 1.0
    return loss, grad / batch


def init_uniform(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int) -> np.ndarray:
    """Uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)]."""
    bound = 1.0 / np.sqrt(max(fan_in, 1))
    return rng.uniform(-bound, bound, size=shape)


def gradcheck(
    f: Callable[[Point], tuple[float, Point]],
    point: Point,
    epsilon: float = 1e-5,
    floor: float = 1e-4,
) -> float:
    """Worst relative error between analytic and central-difference gradients.

    ``f`` maps a point (an array or a dict of arrays) to ``(loss, grads)``
    with grads shaped like the point. Every coordinate is perturbed by
    ``+-epsilon`` in place and restored afterwards. The relative error of a
    coordinate is ``|a - n| / max(|a|, |n|, floor)``; the floor keeps
    vanishing gradients from turning rounding noise into large ratios.

    Raises:
        NonFiniteError: If the loss or a gradient is not finite
    """
    params = point if isinstance(point, dict) else {"x": point}

    def evaluate() -> tuple[float, dict[str, np.ndarray]]:
        loss, grads = f(point)
        grads = grads if isinstance(grads, dict) else {"x": grads}
        check_finite("loss", loss)
        return loss, grads

    _, analytic = evaluate()
    worst = 0.0
    for name, value in params.items():
        check_finite(f"gradient of {name}", analytic[name])
        for idx in np.ndindex(value.shape):
            original = value[idx]
            value[idx] = original + epsilon
            plus, _ = evaluate()
            value[idx] = original - epsilon
            minus, _ = evaluate()
            value[idx] = original

            numeric = (plus - minus) / (2 * epsilon)
            a = float(analytic[name][idx])
            err = abs(a - numeric) / max(abs(a), abs(numeric), floor)
            worst = max(worst, err)
    logger.debug(f"gradcheck worst relative error {worst:.3e}")
    return worst
