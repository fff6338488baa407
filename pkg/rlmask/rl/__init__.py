"""Reward shaping, target construction and the recognizer-in-the-loop training loop."""

from .actions import build_targets, update_action
from .agent import action_scores, enhance_with_actions, select_actions
from .loop import (
    EpochStats,
    RLConfig,
    RLContext,
    RLResult,
    RLTrainer,
    RLUtterance,
    UtteranceOutcome,
    noisy_error_rate,
    rl_epoch,
    utterance_targets,
)
from .rewards import (
    ChunkErrorProfile,
    RewardInputs,
    chunk_errors,
    chunk_reward,
    chunk_rewards,
    utterance_reward,
)

__all__ = [
    "ChunkErrorProfile",
    "EpochStats",
    "RLConfig",
    "RLContext",
    "RLResult",
    "RLTrainer",
    "RLUtterance",
    "RewardInputs",
    "UtteranceOutcome",
    "action_scores",
    "build_targets",
    "chunk_errors",
    "chunk_reward",
    "chunk_rewards",
    "enhance_with_actions",
    "noisy_error_rate",
    "rl_epoch",
    "select_actions",
    "update_action",
    "utterance_reward",
    "utterance_targets",
]
