"""Mini-batch gradient descent on the mean squared error."""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt

from rlmask.common import Defaults, OutputActivation, logger
from rlmask.common.exceptions import DimensionMismatch, InvalidSignal, TrainingDiverged
from rlmask.common.types import FloatArray
from rlmask.common.utils import make_rng
from rlmask.policy.network import LayerParams, Network, forward_activations, preprocess


class TrainConfig(BaseModel):
    """Optimizer settings.

    Attributes:
        learning_rate: Step size; zero leaves the parameters untouched.
        epochs: Passes over the data.
        batch_size: Samples per gradient step.
        seed: Seed of the per-epoch shuffling.
        shuffle: Whether samples are visited in a seeded random order.
    """

    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(default=Defaults.LEARNING_RATE, ge=0.0)
    epochs: PositiveInt = Defaults.PRETRAIN_EPOCHS
    batch_size: PositiveInt = Defaults.BATCH_SIZE
    seed: int = 0
    shuffle: bool = True


class TrainResult(BaseModel):
    """Trained network and its per-epoch mean loss."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    network: Network
    loss_history: list[float]

    @property
    def final_loss(self) -> float:
        return self.loss_history[-1]


def mse_loss(outputs: np.ndarray, targets: np.ndarray) -> float:
    """Mean over samples of the squared L2 distance between output and target rows."""
    outputs = np.atleast_2d(np.asarray(outputs, dtype=np.float64))
    targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    if outputs.shape != targets.shape:
        raise DimensionMismatch("loss operands", outputs.shape, targets.shape)
    return float(np.sum((outputs - targets) ** 2) / outputs.shape[0])


def _output_delta(output: FloatArray, grad_output: FloatArray, activation: str) -> FloatArray:
    if activation == OutputActivation.LINEAR:
        return grad_output
    if activation == OutputActivation.SIGMOID:
        return grad_output * output * (1.0 - output)
    # softmax Jacobian-vector product
    return output * (grad_output - np.sum(grad_output * output, axis=1, keepdims=True))


def backprop(
    net: Network, features: FloatArray, targets: FloatArray
) -> tuple[float, list[LayerParams]]:
    """Loss and parameter gradients for preprocessed inputs.

    Returns:
        The MSE loss of the batch and one ``LayerParams`` of gradients per layer.
    """
    activations = forward_activations(net, features)
    output = activations[-1]
    n_samples = features.shape[0]
    loss = float(np.sum((output - targets) ** 2) / n_samples)

    delta = _output_delta(output, 2.0 * (output - targets) / n_samples, net.output_activation)
    gradients: list[LayerParams] = []
    for index in range(len(net.layers) - 1, -1, -1):
        previous = activations[index]
        # unvalidated: a diverging step must reach the loss check in ``train``
        gradients.append(
            LayerParams.model_construct(weights=delta.T @ previous, bias=delta.sum(axis=0))
        )
        if index > 0:
            delta = (delta @ net.layers[index].weights) * previous * (1.0 - previous)
    gradients.reverse()
    return loss, gradients


def train(
    net: Network, inputs: np.ndarray, targets: np.ndarray, cfg: TrainConfig
) -> TrainResult:
    """Fit ``net`` to ``targets`` by mini-batch gradient descent on the MSE.

    Inputs are raw (power-domain) rows and go through the network's own preprocessing.
    The reported epoch loss is the sample-weighted mean of the batch losses measured before
    each update.

    Raises:
        TrainingDiverged: If a batch loss is not finite.
    """
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    if inputs.shape[0] == 0:
        raise InvalidSignal("training set is empty")
    if inputs.shape[0] != targets.shape[0]:
        raise DimensionMismatch("training samples", inputs.shape[0], targets.shape[0])
    if targets.shape[1] != net.output_dim:
        raise DimensionMismatch("training targets", net.output_dim, targets.shape[1])

    features = preprocess(net, inputs)
    net = net.copy()
    n_samples = features.shape[0]
    loss_history = []

    for epoch in range(cfg.epochs):
        if cfg.shuffle:
            order = make_rng(cfg.seed, epoch).permutation(n_samples)
        else:
            order = np.arange(n_samples)

        weighted_loss = 0.0
        for batch, start in enumerate(range(0, n_samples, cfg.batch_size)):
            index = order[start : start + cfg.batch_size]
            loss, gradients = backprop(net, features[index], targets[index])
            if not np.isfinite(loss):
                raise TrainingDiverged(epoch, batch, loss, snapshot=net)
            weighted_loss += loss * index.shape[0]
            if cfg.learning_rate > 0:
                for layer, gradient in zip(net.layers, gradients):
                    layer.weights -= cfg.learning_rate * gradient.weights
                    layer.bias -= cfg.learning_rate * gradient.bias

        loss_history.append(weighted_loss / n_samples)
        logger.debug("Epoch %s/%s: loss %.6g", epoch + 1, cfg.epochs, loss_history[-1])

    return TrainResult(network=net, loss_history=loss_history)
