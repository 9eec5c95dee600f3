"""
Tests for optimizers, initializers and checkpoint files.
"""
import json

import numpy as np
import pytest

from page_cce.config import OptimizerConfig
from page_cce.exceptions import CheckpointError, ConfigurationError, GradientError
from page_cce.numerics import (
    SGD,
    Adam,
    Parameter,
    backward,
    create_optimizer,
    load_checkpoint,
    normal,
    save_checkpoint,
    tensor_sum,
    xavier_uniform,
    zeros,
)


def make_quadratic_loss(p: Parameter):
    """Helper: sum of squares."""
    return tensor_sum(p * p)


class TestSGD:
    """Tests for plain gradient descent."""

    def test_single_step(self):
        """w <- w - lr * g."""
        p = Parameter([[1.0, -2.0]], name="p")
        opt = SGD([p], lr=0.1)
        backward(make_quadratic_loss(p))
        opt.step()
        np.testing.assert_allclose(p.data, [[0.8, -1.6]])

    def test_step_before_backward(self):
        """Stepping without gradients is an error."""
        p = Parameter([[1.0]], name="p")
        with pytest.raises(GradientError):
            SGD([p], lr=0.1).step()

    def test_step_zeroes_gradients(self):
        """Gradients are cleared after a step, so a second step needs a new backward."""
        p = Parameter([[1.0]], name="p")
        opt = SGD([p], lr=0.1)
        backward(make_quadratic_loss(p))
        opt.step()
        np.testing.assert_allclose(p.grad, [[0.0]])
        with pytest.raises(GradientError):
            opt.step()

    def test_rejects_nonpositive_lr(self):
        """Learning rate must be positive."""
        with pytest.raises(ConfigurationError):
            SGD([Parameter([1.0])], lr=0.0)


class TestAdam:
    """Tests for Adam."""

    def test_first_step_moves_by_lr(self):
        """With bias correction the first update has magnitude ~lr per coordinate."""
        p = Parameter([[3.0, -4.0]], name="p")
        opt = Adam([p], lr=0.01)
        backward(make_quadratic_loss(p))
        opt.step()
        np.testing.assert_allclose(p.data, [[2.99, -3.99]], atol=1e-6)
        assert opt.state.step == 1

    def test_minimizes_quadratic(self):
        """Repeated steps approach the minimum."""
        p = Parameter([[1.5, -0.5]], name="p")
        opt = Adam([p], lr=0.05)
        for _ in range(500):
            backward(make_quadratic_loss(p))
            opt.step()
        assert np.abs(p.data).max() < 0.1

    def test_factory(self):
        """create_optimizer follows the configured mode."""
        p = Parameter([1.0])
        assert isinstance(create_optimizer([p], OptimizerConfig()), Adam)
        assert isinstance(create_optimizer([p], OptimizerConfig(mode="sgd", lr=0.5)), SGD)


class TestInit:
    """Tests for initializers."""

    def test_xavier_bounds(self):
        """Values lie within ±sqrt(6 / (fan_in + fan_out))."""
        p = xavier_uniform(np.random.default_rng(0), (10, 20), name="w")
        assert np.abs(p.data).max() <= np.sqrt(6.0 / 30.0)
        assert p.name == "w"

    def test_seeded(self):
        """Same generator seed, same values."""
        a = normal(np.random.default_rng(3), (4, 4))
        b = normal(np.random.default_rng(3), (4, 4))
        np.testing.assert_array_equal(a.data, b.data)

    def test_zeros(self):
        """zeros() is all zero and trainable."""
        p = zeros((3,))
        assert p.requires_grad
        assert not p.data.any()


class TestCheckpoint:
    """Tests for checkpoint files."""

    def test_round_trip_is_exact(self, tmp_path):
        """Saved tensors load back bit-for-bit with their metadata."""
        rng = np.random.default_rng(0)
        tensors = {"a": rng.normal(size=(3, 4)), "b": np.array([1e-300, -0.0, 7.5])}
        save_checkpoint(tmp_path / "ckpt.json", tensors, {"note": "x"})
        loaded, metadata = load_checkpoint(tmp_path / "ckpt.json")
        assert metadata == {"note": "x"}
        for name, values in tensors.items():
            assert loaded[name].tobytes() == values.tobytes()

    def test_missing_file(self, tmp_path):
        """A missing checkpoint raises CheckpointError."""
        with pytest.raises(CheckpointError):
            load_checkpoint(tmp_path / "nope.json")

    def test_wrong_format(self, tmp_path):
        """Files of another format are rejected with the field name."""
        path = tmp_path / "other.json"
        path.write_text(json.dumps({"format": "something-else"}))
        with pytest.raises(CheckpointError) as exc:
            load_checkpoint(path)
        assert exc.value.field == "format"
