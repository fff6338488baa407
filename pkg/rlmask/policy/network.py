"""Feedforward network with sigmoid hidden layers and a selectable output head."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from rlmask.common import Defaults, HiddenActivation, OutputActivation
from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.common.types import FloatArray
from rlmask.common.utils import make_rng, safe_log


def _as_float_matrix(value, ndim: int) -> FloatArray:
    array = np.array(value, dtype=np.float64)
    if array.ndim != ndim:
        raise ValueError("expected a {}-d array, got shape {}".format(ndim, array.shape))
    if not np.all(np.isfinite(array)):
        raise ValueError("parameters must be finite")
    return array


class LayerParams(BaseModel):
    """Weights (``out x in``) and bias (``out``) of one affine layer."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    weights: np.ndarray
    bias: np.ndarray

    @field_validator("weights", mode="before")
    @classmethod
    def _check_weights(cls, value):
        return _as_float_matrix(value, 2)

    @field_validator("bias", mode="before")
    @classmethod
    def _check_bias(cls, value):
        return _as_float_matrix(value, 1)

    @model_validator(mode="after")
    def _check_shapes(self) -> LayerParams:
        if self.bias.shape[0] != self.weights.shape[0]:
            raise ValueError(
                "bias length {} != {} output units".format(
                    self.bias.shape[0], self.weights.shape[0]
                )
            )
        return self

    @property
    def fan_in(self) -> int:
        return int(self.weights.shape[1])

    @property
    def fan_out(self) -> int:
        return int(self.weights.shape[0])

    def copy(self) -> LayerParams:
        return LayerParams(weights=self.weights.copy(), bias=self.bias.copy())


class Network(BaseModel):
    """Layered parameter set with input preprocessing.

    Inputs are power values: with ``log_input`` they go through ``log(max(x, 1e-10))`` first,
    then through the stored standardization (``input_mean``/``input_std``) when present.

    Attributes:
        layers: Affine layers, input to output.
        hidden_activation: Activation of every layer but the last.
        output_activation: Activation of the last layer.
        log_input: Whether inputs are log-compressed.
        input_mean: Per-dimension mean of preprocessed training inputs.
        input_std: Per-dimension standard deviation of preprocessed training inputs.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    layers: list[LayerParams]
    hidden_activation: str = HiddenActivation.SIGMOID
    output_activation: str = OutputActivation.SOFTMAX
    log_input: bool = True
    input_mean: Optional[np.ndarray] = None
    input_std: Optional[np.ndarray] = None

    @field_validator("input_mean", "input_std", mode="before")
    @classmethod
    def _check_stats(cls, value):
        if value is None:
            return None
        return _as_float_matrix(value, 1)

    @model_validator(mode="after")
    def _check_network(self) -> Network:
        if not self.layers:
            raise ValueError("a network needs at least one layer")
        if self.hidden_activation not in HiddenActivation.ALL:
            raise ValueError("unknown hidden activation `{}`".format(self.hidden_activation))
        if self.output_activation not in OutputActivation.ALL:
            raise ValueError("unknown output activation `{}`".format(self.output_activation))
        for previous, layer in zip(self.layers, self.layers[1:]):
            if layer.fan_in != previous.fan_out:
                raise ValueError(
                    "layer expects {} inputs but the previous layer has {} outputs".format(
                        layer.fan_in, previous.fan_out
                    )
                )
        if (self.input_mean is None) != (self.input_std is None):
            raise ValueError("input_mean and input_std must be given together")
        if self.input_mean is not None:
            shapes = (self.input_mean.shape[0], self.input_std.shape[0])
            if shapes != (self.input_dim, self.input_dim):
                raise ValueError("normalization statistics do not match the input dimension")
            if np.any(self.input_std <= 0):
                raise ValueError("input_std must be positive")
        return self

    @property
    def input_dim(self) -> int:
        return self.layers[0].fan_in

    @property
    def output_dim(self) -> int:
        return self.layers[-1].fan_out

    @property
    def layer_sizes(self) -> list[int]:
        return [self.input_dim] + [layer.fan_out for layer in self.layers]

    def copy(self) -> Network:
        return self.model_copy(
            update={
                "layers": [layer.copy() for layer in self.layers],
                "input_mean": None if self.input_mean is None else self.input_mean.copy(),
                "input_std": None if self.input_std is None else self.input_std.copy(),
            }
        )


def glorot_uniform(
    fan_in: int, fan_out: int, rng: np.random.Generator, scale: float = 1.0
) -> LayerParams:
    """Weights uniform in ``[-r, r]``, ``r = scale * sqrt(6 / (fan_in + fan_out))``; zero bias."""
    limit = scale * np.sqrt(6.0 / (fan_in + fan_out))
    return LayerParams(
        weights=rng.uniform(-limit, limit, size=(fan_out, fan_in)), bias=np.zeros(fan_out)
    )


def init_network(
    layer_sizes: Sequence[int],
    output_activation: str,
    seed: int = 0,
    log_input: bool = True,
) -> Network:
    """Randomly initialized network with the given ``[input, hidden..., output]`` sizes."""
    if len(layer_sizes) < 2:
        raise ValueError("layer_sizes needs at least an input and an output size")
    rng = make_rng(seed)
    layers = [glorot_uniform(i, o, rng) for i, o in zip(layer_sizes, layer_sizes[1:])]
    return Network(layers=layers, output_activation=output_activation, log_input=log_input)


def sigmoid(z: np.ndarray) -> FloatArray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def softmax(z: np.ndarray) -> FloatArray:
    shifted = z - np.max(z, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


def apply_output_activation(z: np.ndarray, activation: str) -> FloatArray:
    if activation == OutputActivation.LINEAR:
        return z
    if activation == OutputActivation.SIGMOID:
        return sigmoid(z)
    return softmax(z)


def preprocess(net: Network, inputs: np.ndarray) -> FloatArray:
    """Log-compress and standardize raw inputs (rows are samples)."""
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    if inputs.shape[1] != net.input_dim:
        raise DimensionMismatch("network input", net.input_dim, inputs.shape[1])
    if not np.all(np.isfinite(inputs)):
        raise InvalidSignal("network input contains non-finite values")
    features = safe_log(inputs) if net.log_input else inputs
    if net.input_mean is not None:
        features = (features - net.input_mean) / net.input_std
    return features


def forward_activations(net: Network, features: FloatArray) -> list[FloatArray]:
    """Activations of every layer for already preprocessed inputs, input included."""
    activations = [features]
    last = len(net.layers) - 1
    for index, layer in enumerate(net.layers):
        z = activations[-1] @ layer.weights.T + layer.bias
        if index == last:
            activations.append(apply_output_activation(z, net.output_activation))
        else:
            activations.append(sigmoid(z))
    return activations


def forward(net: Network, ctx: np.ndarray) -> FloatArray:
    """Network output for one context vector or a stack of them (one per row)."""
    single = np.ndim(ctx) == 1
    output = forward_activations(net, preprocess(net, ctx))[-1]
    return output[0] if single else output


def hidden_activations(net: Network, ctx: np.ndarray) -> list[FloatArray]:
    """Outputs of every layer except the last, for a stack of context vectors."""
    return forward_activations(net, preprocess(net, ctx))[1:-1]


def standardization(features: np.ndarray) -> tuple[FloatArray, FloatArray]:
    """Per-dimension mean and standard deviation; near-constant dimensions get a unit std."""
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    std = features.std(axis=0)
    return features.mean(axis=0), np.where(std < Defaults.STD_FLOOR, 1.0, std)


def fit_normalizer(net: Network, inputs: np.ndarray) -> Network:
    """Copy of ``net`` whose standardization statistics come from ``inputs``."""
    unnormalized = net.model_copy(update={"input_mean": None, "input_std": None})
    mean, std = standardization(preprocess(unnormalized, inputs))
    return net.model_copy(update={"input_mean": mean, "input_std": std})


def argmax_action(action_vector: np.ndarray) -> int:
    """Index of the largest score, lowest index on ties."""
    action_vector = np.asarray(action_vector)
    if action_vector.ndim != 1 or action_vector.size == 0:
        raise InvalidSignal("action vector must be a non-empty vector")
    return int(np.argmax(action_vector))
