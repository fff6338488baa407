import numpy as np
import pytest

from rlmask.common import OutputActivation
from rlmask.common.exceptions import DimensionMismatch, TrainingDiverged
from rlmask.policy import TrainConfig, backprop, init_network, mse_loss, train
from rlmask.policy.network import forward_activations

from . import PolicyFixtures


def _numerical_gradient(net, features, targets, h=1e-5):
    gradients = []
    for layer in net.layers:
        layer_gradients = []
        for params in (layer.weights, layer.bias):
            numeric = np.zeros_like(params)
            for index in np.ndindex(params.shape):
                original = params[index]
                params[index] = original + h
                plus = mse_loss(forward_activations(net, features)[-1], targets)
                params[index] = original - h
                minus = mse_loss(forward_activations(net, features)[-1], targets)
                params[index] = original
                numeric[index] = (plus - minus) / (2 * h)
            layer_gradients.append(numeric)
        gradients.append(layer_gradients)
    return gradients


class TestBackprop(PolicyFixtures):
    @pytest.mark.parametrize(
        "activation",
        [OutputActivation.LINEAR, OutputActivation.SIGMOID, OutputActivation.SOFTMAX],
    )
    def test_matches_finite_differences(self, activation, rng):
        net = init_network([5, 4, 3, 3], activation, seed=2, log_input=False)
        features = rng.normal(size=(7, 5))
        targets = rng.uniform(size=(7, 3))

        _, analytic = backprop(net, features, targets)
        numeric = _numerical_gradient(net, features, targets)

        a = np.concatenate([np.r_[g.weights.ravel(), g.bias] for g in analytic])
        n = np.concatenate([np.r_[w.ravel(), b] for w, b in numeric])
        assert np.linalg.norm(a - n) / (np.linalg.norm(a) + np.linalg.norm(n)) < 1e-6

    def test_loss_matches_mse(self, small_net, rng):
        features = rng.normal(size=(4, 5))
        targets = rng.uniform(size=(4, 3))

        loss, _ = backprop(small_net, features, targets)

        outputs = forward_activations(small_net, features)[-1]
        assert loss == pytest.approx(mse_loss(outputs, targets))


class TestMseLoss:
    def test_value(self):
        assert mse_loss(np.array([[1.0, 2.0], [0.0, 0.0]]), np.zeros((2, 2))) == pytest.approx(2.5)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mse_loss(np.zeros((2, 2)), np.zeros((2, 3)))


class TestTrain(PolicyFixtures):
    def test_loss_decreases(self, toy_problem):
        inputs, targets = toy_problem
        net = init_network([6, 8, 2], OutputActivation.SIGMOID, seed=0)
        cfg = TrainConfig(learning_rate=0.5, epochs=40, batch_size=8)

        result = train(net, inputs, targets, cfg)

        assert result.loss_history[-1] < result.loss_history[0]
        assert len(result.loss_history) == 40

    def test_zero_learning_rate_changes_nothing(self, toy_problem):
        inputs, targets = toy_problem
        net = init_network([6, 4, 2], OutputActivation.SIGMOID, seed=0)

        result = train(net, inputs, targets, TrainConfig(learning_rate=0.0, epochs=3))

        for before, after in zip(net.layers, result.network.layers):
            assert np.array_equal(before.weights, after.weights)
            assert np.array_equal(before.bias, after.bias)
        assert result.loss_history[0] == pytest.approx(result.loss_history[-1])

    def test_input_network_untouched(self, toy_problem):
        inputs, targets = toy_problem
        net = init_network([6, 4, 2], OutputActivation.SIGMOID, seed=0)
        before = net.layers[0].weights.copy()

        train(net, inputs, targets, TrainConfig(learning_rate=1.0, epochs=2))

        assert np.array_equal(net.layers[0].weights, before)

    def test_seeded_shuffling_is_deterministic(self, toy_problem):
        inputs, targets = toy_problem
        net = init_network([6, 4, 2], OutputActivation.SIGMOID, seed=0)
        cfg = TrainConfig(learning_rate=0.3, epochs=3, batch_size=5, seed=4)

        first = train(net, inputs, targets, cfg)
        second = train(net, inputs, targets, cfg)

        assert first.loss_history == second.loss_history

    def test_divergence_is_reported(self, rng):
        net = init_network([4, 3], OutputActivation.LINEAR, seed=0, log_input=False)
        inputs = rng.normal(size=(20, 4))
        targets = rng.normal(size=(20, 3))

        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(TrainingDiverged) as excinfo:
                train(net, inputs, targets, TrainConfig(learning_rate=1e3, epochs=50, batch_size=1))

        assert excinfo.value.snapshot is not None

    def test_target_dimension(self, small_net, rng):
        with pytest.raises(DimensionMismatch):
            train(small_net, rng.normal(size=(4, 5)), np.zeros((4, 2)), TrainConfig(epochs=1))

    def test_negative_learning_rate_rejected(self):
        with pytest.raises(ValueError):
            TrainConfig(learning_rate=-0.1)
