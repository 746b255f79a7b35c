"""Tests for linkx_core.kernels module."""

import numpy as np
import pytest
import scipy.sparse as sp

from linkx_core.errors import NonFiniteError, ShapeError
from linkx_core.kernels import (
    gradcheck,
    linear_backward,
    linear_forward,
    relu,
    relu_backward,
    softmax,
    softmax_xent,
    spmm,
)


class TestSpmm:
    """Tests for spmm."""

    @pytest.mark.parametrize("n", [1, 2, 7, 16, 33, 64])
    def test_matches_dense(self, n):
        """Sparse-dense product equals the densified matmul."""
        rng = np.random.default_rng(n)
        for density in (0.0, 0.1, 0.5, 1.0):
            S = sp.random(n, n, density=density, format="csr", random_state=int(rng.integers(1 << 30)))
            B = rng.normal(size=(n, 5))
            np.testing.assert_allclose(spmm(S, B), S.toarray() @ B, rtol=0, atol=1e-12)

    def test_shape_mismatch(self):
        """Inner dimensions must agree."""
        with pytest.raises(ShapeError):
            spmm(sp.csr_matrix((3, 4)), np.zeros((3, 2)))


class TestLinear:
    """Tests for linear_forward/linear_backward."""

    def test_sparse_input_matches_dense(self):
        """A sparse input gives the same output and weight gradient."""
        rng = np.random.default_rng(0)
        W, b = rng.normal(size=(3, 10)), rng.normal(size=3)
        X = sp.random(10, 6, density=0.3, format="csc", random_state=1)
        np.testing.assert_allclose(linear_forward(W, b, X), W @ X.toarray() + b[:, None], atol=1e-12)

        grad = rng.normal(size=(3, 6))
        dW_sparse, db_sparse, dX_sparse = linear_backward(W, X, grad)
        dW_dense, db_dense, dX_dense = linear_backward(W, X.toarray(), grad)
        np.testing.assert_allclose(dW_sparse, dW_dense, atol=1e-12)
        np.testing.assert_allclose(db_sparse, db_dense)
        assert dX_sparse is None
        np.testing.assert_allclose(dX_dense, W.T @ grad)

    def test_shape_checks(self):
        """Mismatched weights and bias raise."""
        with pytest.raises(ShapeError):
            linear_forward(np.zeros((2, 3)), None, np.zeros((4, 1)))
        with pytest.raises(ShapeError):
            linear_forward(np.zeros((2, 3)), np.zeros(3), np.zeros((3, 1)))


class TestRelu:
    """Tests for relu/relu_backward."""

    def test_negative_input(self):
        """All-negative input gives zero output and zero gradient."""
        x = -np.arange(1.0, 7.0).reshape(2, 3)
        assert not relu(x).any()
        assert not relu_backward(x, np.ones_like(x)).any()

    def test_positive_input(self):
        """All-positive input passes values and gradient through."""
        x = np.arange(1.0, 7.0).reshape(2, 3)
        upstream = np.full_like(x, 0.5)
        assert np.array_equal(relu(x), x)
        assert np.array_equal(relu_backward(x, upstream), upstream)

    def test_mixed_input_gradcheck(self):
        """The masked gradient matches central differences away from the kink."""
        rng = np.random.default_rng(0)
        x = rng.normal(size=(4, 5))
        x[np.abs(x) < 1e-2] = 0.5
        weights = rng.normal(size=x.shape)

        def f(v):
            return float(np.sum(weights * relu(v))), relu_backward(v, weights)

        assert gradcheck(f, x) < 1e-6


class TestSoftmaxXent:
    """Tests for softmax and softmax_xent."""

    def test_softmax_columns_sum_to_one(self):
        """Column-wise normalization, stable for large logits."""
        P = softmax(np.array([[1000.0, 0.0], [1001.0, 0.0]]))
        np.testing.assert_allclose(P.sum(axis=0), 1.0)
        assert np.isfinite(P).all()

    def test_uniform_logits_loss(self):
        """Equal logits give log C loss."""
        loss, _ = softmax_xent(np.zeros((4, 3)), np.array([0, 1, 2]))
        assert loss == pytest.approx(np.log(4))

    def test_gradient(self):
        """Analytic gradient matches finite differences."""
        rng = np.random.default_rng(1)
        labels = rng.integers(0, 3, size=5)
        err = gradcheck(lambda z: softmax_xent(z, labels), rng.normal(size=(3, 5)))
        assert err < 1e-5

    def test_label_range(self):
        """Labels outside [0, C) raise."""
        with pytest.raises(ShapeError):
            softmax_xent(np.zeros((2, 2)), np.array([0, 2]))


class TestGradcheck:
    """Tests for gradcheck itself."""

    def test_detects_wrong_gradient(self):
        """A wrong analytic gradient yields a large error."""
        err = gradcheck(lambda x: (float(np.sum(x**2)), x), np.array([1.0, -2.0]))
        assert err > 0.1

    def test_restores_point(self):
        """Coordinates are restored after perturbation."""
        x = np.array([0.5, 1.5])
        gradcheck(lambda v: (float(np.sum(v**2)), 2 * v), x)
        assert x.tolist() == [0.5, 1.5]

    def test_non_finite(self):
        """Non-finite losses raise."""
        with pytest.raises(NonFiniteError):
            gradcheck(lambda x: (float("nan"), x), np.ones(2))
