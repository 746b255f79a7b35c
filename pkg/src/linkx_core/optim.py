"""AdamW with decoupled weight decay over named parameter dicts."""

import logging
from dataclasses import dataclass, field

import numpy as np

from linkx_core.errors import NonFiniteError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdamWConfig:
    """Optimizer constants."""

    lr: float = 0.01
    weight_decay: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self) -> None:
        if self.lr <= 0:
            raise ValueError(f"Learning rate must be positive, got {self.lr}")
        if self.weight_decay < 0:
            raise ValueError(f"Weight decay must be non-negative, got {self.weight_decay}")


@dataclass
class OptimizerState:
    """First/second moment estimates per parameter."""

    exp_avg: dict[str, np.ndarray] = field(default_factory=dict)
    exp_avg_sq: dict[str, np.ndarray] = field(default_factory=dict)
    step: int = 0

    @classmethod
    def zeros_like(cls, params: dict[str, np.ndarray]) -> "OptimizerState":
        return cls(
            exp_avg={k: np.zeros_like(v) for k, v in params.items()},
            exp_avg_sq={k: np.zeros_like(v) for k, v in params.items()},
        )


def decays(name: str) -> bool:
    """Weight decay applies to weight matrices, never to biases."""
    return not name.endswith(".b")


def adamw_step(
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    state: OptimizerState,
    cfg: AdamWConfig,
) -> tuple[dict[str, np.ndarray], OptimizerState]:
    """One in-place AdamW update.

    Decay shrinks weights directly by ``(1 - lr * weight_decay)`` before the
    bias-corrected moment step; it never enters the gradient.

    Raises:
        NonFiniteError: If any gradient holds NaN or Inf (params untouched)
    """
    for name, g in grads.items():
        if not np.isfinite(g).all():
            raise NonFiniteError(f"Non-finite gradient for parameter '{name}' at step {state.step + 1}")

    state.step += 1
    bias1 = 1.0 - cfg.beta1**state.step
    bias2 = 1.0 - cfg.beta2**state.step

    for name, p in params.items():
        g = grads[name]
        if cfg.weight_decay and decays(name):
            p *= 1.0 - cfg.lr * cfg.weight_decay

        m, v = state.exp_avg[name], state.exp_avg_sq[name]
        m *= cfg.beta1
        m += (1.0 - cfg.beta1) * g
        v *= cfg.beta2
        v += (1.0 - cfg.beta2) * g * g

        p -= cfg.lr * (m / bias1) / (np.sqrt(v / bias2) + cfg.eps)
    return params, state
