"""Mask estimator pretraining and the action-estimator head."""

from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from rlmask.common import Defaults, OutputActivation, logger
from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.common.utils import make_rng, safe_log
from rlmask.policy.network import Network, fit_normalizer, forward, glorot_uniform, init_network
from rlmask.policy.training import TrainConfig, TrainResult, mse_loss, train


class PretrainResult(BaseModel):
    """Pretrained network with its loss before and after training."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    network: Network
    initial_loss: float
    loss_history: list[float]

    @property
    def final_loss(self) -> float:
        return self.loss_history[-1]


def _pretrain(
    inputs: np.ndarray,
    targets: np.ndarray,
    cfg: TrainConfig,
    hidden_layers: Sequence[int],
    output_activation: str,
) -> PretrainResult:
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    if inputs.shape[0] != targets.shape[0]:
        raise DimensionMismatch("pretraining samples", inputs.shape[0], targets.shape[0])

    sizes = [inputs.shape[1], *hidden_layers, targets.shape[1]]
    net = fit_normalizer(init_network(sizes, output_activation, seed=cfg.seed), inputs)
    initial_loss = mse_loss(forward(net, inputs), targets)
    result: TrainResult = train(net, inputs, targets, cfg)
    logger.info(
        "Pretrained %s network %s: loss %.6g -> %.6g",
        output_activation,
        sizes,
        initial_loss,
        result.final_loss,
    )
    return PretrainResult(
        network=result.network, initial_loss=initial_loss, loss_history=result.loss_history
    )


def pretrain_mask_estimator(
    noisy_contexts: np.ndarray,
    ibm_targets: np.ndarray,
    cfg: TrainConfig,
    hidden_layers: Sequence[int] = Defaults.PRETRAIN_HIDDEN_LAYERS,
) -> PretrainResult:
    """Train a sigmoid-output network to predict the ideal binary mask of each chunk."""
    ibm_targets = np.asarray(ibm_targets)
    if not np.all((ibm_targets == 0) | (ibm_targets == 1)):
        raise InvalidSignal("mask estimator targets must be binary")
    return _pretrain(noisy_contexts, ibm_targets, cfg, hidden_layers, OutputActivation.SIGMOID)


def pretrain_spectral_mapper(
    noisy_contexts: np.ndarray,
    clean_chunks: np.ndarray,
    cfg: TrainConfig,
    hidden_layers: Sequence[int] = Defaults.PRETRAIN_HIDDEN_LAYERS,
) -> PretrainResult:
    """Train a linear-output network mapping noisy context to the log clean chunk."""
    return _pretrain(
        noisy_contexts, safe_log(clean_chunks), cfg, hidden_layers, OutputActivation.LINEAR
    )


def extend_to_action_head(
    pretrained: Network,
    A: int = Defaults.NUM_CLUSTERS,
    hidden_units: int = Defaults.HEAD_HIDDEN_UNITS,
    hidden_layers: int = Defaults.HEAD_HIDDEN_LAYERS,
    seed: int = 0,
    init_scale: float = Defaults.NEW_LAYER_INIT_SCALE,
) -> Network:
    """Turn a pretrained network into an action estimator.

    All pretrained layers are copied; the old output layer becomes a sigmoid hidden layer.
    ``hidden_layers`` new sigmoid layers of ``hidden_units`` units and a softmax layer of ``A``
    units are appended, initialized at ``init_scale`` times the usual uniform range.
    """
    if pretrained.output_activation not in {OutputActivation.SIGMOID, OutputActivation.LINEAR}:
        raise ValueError(
            "cannot extend a network with a `{}` head".format(pretrained.output_activation)
        )
    if pretrained.output_activation == OutputActivation.LINEAR:
        logger.warning("Extending a linear-head network: its outputs pass through a sigmoid now")

    rng = make_rng(seed, A)
    layers = [layer.copy() for layer in pretrained.layers]
    width = pretrained.output_dim
    for _ in range(hidden_layers):
        layers.append(glorot_uniform(width, hidden_units, rng, scale=init_scale))
        width = hidden_units
    layers.append(glorot_uniform(width, A, rng, scale=init_scale))

    return pretrained.copy().model_copy(
        update={"layers": layers, "output_activation": OutputActivation.SOFTMAX}
    )
