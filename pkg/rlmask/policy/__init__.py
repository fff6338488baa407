"""Feedforward mask/action estimators and their training."""

from .estimators import (
    PretrainResult,
    extend_to_action_head,
    pretrain_mask_estimator,
    pretrain_spectral_mapper,
)
from .network import (
    LayerParams,
    Network,
    argmax_action,
    fit_normalizer,
    forward,
    hidden_activations,
    init_network,
    standardization,
)
from .persistence import load_network, save_network
from .training import TrainConfig, TrainResult, backprop, mse_loss, train

__all__ = [
    "LayerParams",
    "Network",
    "PretrainResult",
    "TrainConfig",
    "TrainResult",
    "argmax_action",
    "backprop",
    "extend_to_action_head",
    "fit_normalizer",
    "forward",
    "hidden_activations",
    "init_network",
    "load_network",
    "mse_loss",
    "pretrain_mask_estimator",
    "pretrain_spectral_mapper",
    "save_network",
    "standardization",
    "train",
]
