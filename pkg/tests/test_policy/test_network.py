import numpy as np
import pytest

from rlmask.common import OutputActivation
from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.policy import (
    LayerParams,
    Network,
    argmax_action,
    fit_normalizer,
    forward,
    hidden_activations,
    init_network,
)

from . import PolicyFixtures


class TestNetwork(PolicyFixtures):
    def test_layer_sizes(self, small_net):
        assert small_net.layer_sizes == [5, 4, 3]
        assert small_net.input_dim == 5
        assert small_net.output_dim == 3

    def test_softmax_rows_sum_to_one(self, small_net, rng):
        outputs = forward(small_net, rng.normal(size=(10, 5)))

        assert outputs.shape == (10, 3)
        assert np.allclose(outputs.sum(axis=1), 1.0)
        assert np.all(outputs > 0)

    def test_single_vector(self, small_net, rng):
        assert forward(small_net, rng.normal(size=5)).shape == (3,)

    def test_sigmoid_head_in_unit_interval(self, rng):
        net = init_network([4, 6, 2], OutputActivation.SIGMOID, seed=1)

        outputs = forward(net, rng.uniform(0, 1, size=(8, 4)))

        assert np.all((outputs > 0) & (outputs < 1))

    def test_hidden_activations(self, small_net, rng):
        hidden = hidden_activations(small_net, rng.normal(size=(2, 5)))

        assert len(hidden) == 1
        assert hidden[0].shape == (2, 4)

    def test_log_input_handles_zeros(self):
        net = init_network([3, 2], OutputActivation.LINEAR, seed=0)

        assert np.all(np.isfinite(forward(net, np.zeros((1, 3)))))

    def test_input_dimension(self, small_net):
        with pytest.raises(DimensionMismatch):
            forward(small_net, np.zeros(4))

    def test_non_finite_input(self, small_net):
        with pytest.raises(InvalidSignal):
            forward(small_net, np.full(5, np.nan))

    def test_mismatched_layers_rejected(self):
        with pytest.raises(ValueError):
            Network(
                layers=[
                    LayerParams(weights=np.zeros((3, 2)), bias=np.zeros(3)),
                    LayerParams(weights=np.zeros((1, 4)), bias=np.zeros(1)),
                ]
            )

    def test_seeded_init_is_deterministic(self):
        first = init_network([5, 4, 3], OutputActivation.SOFTMAX, seed=11)
        second = init_network([5, 4, 3], OutputActivation.SOFTMAX, seed=11)

        for a, b in zip(first.layers, second.layers):
            assert np.array_equal(a.weights, b.weights)

    def test_copy_is_deep(self, small_net):
        clone = small_net.copy()
        clone.layers[0].weights[0, 0] += 1.0

        assert clone.layers[0].weights[0, 0] != small_net.layers[0].weights[0, 0]


class TestNormalizer(PolicyFixtures):
    def test_standardizes_training_inputs(self, toy_problem):
        inputs, _ = toy_problem
        net = init_network([6, 2], OutputActivation.LINEAR, seed=0)

        normalized = fit_normalizer(net, inputs)

        features = (np.log(inputs) - normalized.input_mean) / normalized.input_std
        assert np.allclose(features.mean(axis=0), 0.0, atol=1e-12)
        assert np.allclose(features.std(axis=0), 1.0)
        assert net.input_mean is None

    def test_constant_dimension_keeps_unit_std(self):
        inputs = np.ones((10, 3))
        net = init_network([3, 2], OutputActivation.LINEAR, seed=0)

        assert np.all(fit_normalizer(net, inputs).input_std == 1.0)


class TestArgmaxAction:
    def test_picks_largest(self):
        assert argmax_action(np.array([0.1, 0.7, 0.2])) == 1

    def test_ties_pick_lowest(self):
        assert argmax_action(np.array([0.4, 0.4, 0.2])) == 0

    def test_empty(self):
        with pytest.raises(InvalidSignal):
            argmax_action(np.array([]))
