"""Tests for linkx_core.optim module."""

import numpy as np
import pytest

from linkx_core.errors import NonFiniteError
from linkx_core.optim import AdamWConfig, OptimizerState, adamw_step, decays


class TestAdamW:
    """Tests for adamw_step."""

    def test_first_step_closed_form(self):
        """Without decay the first update is -lr * g / (|g| + eps)."""
        cfg = AdamWConfig(lr=0.01, weight_decay=0.0)
        g = np.array([0.3, -2.0, 1e-3])
        params = {"w.W": np.zeros(3)}
        adamw_step(params, {"w.W": g}, OptimizerState.zeros_like(params), cfg)
        np.testing.assert_allclose(params["w.W"], -cfg.lr * g / (np.abs(g) + cfg.eps), rtol=1e-12)

    def test_zero_gradient_pure_shrink(self):
        """With g = 0 decay shrinks weights by (1 - lr * wd) and leaves biases alone."""
        cfg = AdamWConfig(lr=0.01, weight_decay=0.1)
        params = {"layer.W": np.array([1.0, -3.0]), "layer.b": np.array([2.0])}
        grads = {k: np.zeros_like(v) for k, v in params.items()}
        adamw_step(params, grads, OptimizerState.zeros_like(params), cfg)
        np.testing.assert_allclose(params["layer.W"], np.array([1.0, -3.0]) * (1 - 0.01 * 0.1), rtol=1e-15)
        assert params["layer.b"].tolist() == [2.0]

    def test_decay_is_not_in_gradient(self):
        """Decay does not enter the moment estimates."""
        cfg = AdamWConfig(lr=0.01, weight_decay=0.5)
        params = {"w.W": np.ones(2)}
        state = OptimizerState.zeros_like(params)
        adamw_step(params, {"w.W": np.zeros(2)}, state, cfg)
        assert not state.exp_avg["w.W"].any()
        assert state.step == 1

    def test_quadratic_bowl_monotone(self):
        """Distance to the optimum strictly decreases over 200 steps."""
        rng = np.random.default_rng(0)
        target = rng.normal(size=5)
        params = {"x.W": target + 5.0}
        state = OptimizerState.zeros_like(params)
        cfg = AdamWConfig(lr=0.01, weight_decay=0.0)
        distances = []
        for _ in range(200):
            adamw_step(params, {"x.W": params["x.W"] - target}, state, cfg)
            distances.append(float(np.linalg.norm(params["x.W"] - target)))
        assert all(b < a for a, b in zip(distances, distances[1:]))

    def test_non_finite_gradient(self):
        """NaN gradients abort without touching parameters."""
        params = {"w.W": np.ones(2)}
        state = OptimizerState.zeros_like(params)
        with pytest.raises(NonFiniteError, match="w.W"):
            adamw_step(params, {"w.W": np.array([np.nan, 0.0])}, state, AdamWConfig())
        assert params["w.W"].tolist() == [1.0, 1.0]
        assert state.step == 0

    def test_invalid_config(self):
        """lr must be positive and weight decay non-negative."""
        with pytest.raises(ValueError):
            AdamWConfig(lr=0.0)
        with pytest.raises(ValueError):
            AdamWConfig(weight_decay=-1.0)

    def test_decays(self):
        """Only weights decay."""
        assert decays("mlp.0.W")
        assert not decays("mlp.0.b")
