"""Recognizer-in-the-loop training of the action estimator."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt

from rlmask.common import Defaults, logger
from rlmask.common.exceptions import (
    DimensionMismatch,
    EpochAborted,
    InvalidSignal,
    RecognizerFailure,
)
from rlmask.common.types import PathType, Recognizer
from rlmask.common.utils import make_rng
from rlmask.common.workers import map_ordered
from rlmask.features import FeatureExtractor, UtteranceFeatures, write_wav
from rlmask.masks import Codebook
from rlmask.policy import Network, TrainConfig, train
from rlmask.recognizers import RecognitionRequest
from rlmask.rl.actions import build_targets
from rlmask.rl.agent import action_scores, enhance_with_actions, select_actions
from rlmask.rl.rewards import RewardInputs, chunk_errors, chunk_rewards, utterance_reward

EPOCH_LOG_COLUMNS = (
    "epoch",
    "mean_reward",
    "mean_z_enhanced",
    "mean_z_noisy",
    "loss",
    "scored",
    "failed",
)


class RLConfig(BaseModel):
    """Settings of the reinforcement stage.

    Attributes:
        epochs: Number of RL epochs.
        alpha: Reward scale.
        learning_rate: Step size of the per-epoch training pass.
        batch_size: Mini-batch size of the training pass.
        pass_epochs: Passes over the collected targets per RL epoch.
        seed: Seed of the utterance order and of the training pass shuffling.
        max_failed_fraction: Largest fraction of utterances allowed to fail recognition.
        num_threads: Utterances enhanced and scored concurrently.
    """

    model_config = ConfigDict(frozen=True)

    epochs: PositiveInt = Defaults.RL_EPOCHS
    alpha: PositiveFloat = Defaults.REWARD_ALPHA
    learning_rate: float = Field(default=Defaults.LEARNING_RATE, ge=0.0)
    batch_size: PositiveInt = Defaults.BATCH_SIZE
    pass_epochs: PositiveInt = Defaults.RL_PASS_EPOCHS
    seed: int = 0
    max_failed_fraction: float = Field(default=Defaults.MAX_FAILED_FRACTION, ge=0.0, le=1.0)
    num_threads: PositiveInt = 1

    def pass_config(self, epoch: int) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            epochs=self.pass_epochs,
            batch_size=self.batch_size,
            seed=self.seed * 1000 + epoch,
        )


class RLUtterance(BaseModel):
    """A training utterance prepared for the RL stage.

    Attributes:
        utterance_id: Unique id, also the stem of the scratch WAV file.
        noisy_path: WAV file of the unenhanced mixture.
        reference: Reference handed to the recognizer (transcript or clean WAV path).
        features: Analysis of the noisy mixture.
        clean_chunks: Clean chunk vectors aligned with ``features.chunks``.
        oracle_actions: Codebook index closest to each chunk's ideal mask.
        z_noisy: Error rate of the unenhanced mixture, filled on first use.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    utterance_id: str
    noisy_path: Path
    reference: str
    features: UtteranceFeatures
    clean_chunks: np.ndarray
    oracle_actions: np.ndarray
    z_noisy: Optional[float] = None

    def check(self) -> None:
        chunks = self.features.chunks.chunks
        if self.clean_chunks.shape != chunks.shape:
            raise DimensionMismatch("clean chunks", chunks.shape, self.clean_chunks.shape)
        if self.oracle_actions.shape != (chunks.shape[0],):
            raise DimensionMismatch("oracle actions", (chunks.shape[0],), self.oracle_actions.shape)


class UtteranceOutcome(BaseModel):
    """What one utterance contributes to an RL epoch."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    utterance_id: str
    contexts: np.ndarray
    targets: np.ndarray
    reward: float
    z_noisy: float
    z_enhanced: float


class EpochStats(BaseModel):
    epoch: int
    mean_reward: float
    mean_z_enhanced: float
    mean_z_noisy: float
    loss: float
    scored: int
    failed: list[str] = Field(default_factory=list)

    def as_row(self) -> list:
        return [
            self.epoch,
            "{:.6f}".format(self.mean_reward),
            "{:.6f}".format(self.mean_z_enhanced),
            "{:.6f}".format(self.mean_z_noisy),
            "{:.8g}".format(self.loss),
            self.scored,
            len(self.failed),
        ]


@dataclass
class RLContext:
    """Everything an RL epoch needs besides the network."""

    extractor: FeatureExtractor
    codebook: Codebook
    recognizer: Recognizer
    scratch_dir: Path


def _score(recognizer: Recognizer, utterance_id: str, wav_path: Path, reference: str) -> float:
    request = RecognitionRequest(utterance_id=utterance_id, wav_path=wav_path, reference=reference)
    return recognizer.score(request).value


def noisy_error_rate(utterance: RLUtterance, recognizer: Recognizer) -> float:
    """Error rate of the unenhanced mixture, computed once per utterance."""
    if utterance.z_noisy is None:
        utterance.z_noisy = _score(
            recognizer, utterance.utterance_id, utterance.noisy_path, utterance.reference
        )
    return utterance.z_noisy


def utterance_targets(
    utterance: RLUtterance, net: Network, ctx: RLContext, alpha: float
) -> UtteranceOutcome:
    """Enhance one utterance with the current policy, score it, and build its target vectors."""
    z_noisy = noisy_error_rate(utterance, ctx.recognizer)

    scores = action_scores(net, utterance.features)
    actions = select_actions(scores)
    enhanced = enhance_with_actions(ctx.extractor, ctx.codebook, utterance.features, actions)
    wav_path = write_wav(ctx.scratch_dir / "{}.wav".format(utterance.utterance_id), enhanced)
    z_enhanced = _score(ctx.recognizer, utterance.utterance_id, wav_path, utterance.reference)

    R = utterance_reward(RewardInputs(z_noisy=z_noisy, z_enhanced=z_enhanced, alpha=alpha))
    enhanced_chunks = ctx.extractor.chunk(ctx.extractor.mel_spectrogram(enhanced)).chunks
    profile = chunk_errors(utterance.clean_chunks, enhanced_chunks)
    targets = build_targets(
        scores, actions, utterance.oracle_actions, chunk_rewards(profile, R), R
    )
    logger.debug(
        "Utterance %s: z_noisy %.4f, z_enhanced %.4f, R %.4f",
        utterance.utterance_id,
        z_noisy,
        z_enhanced,
        R,
    )
    return UtteranceOutcome(
        utterance_id=utterance.utterance_id,
        contexts=utterance.features.contexts,
        targets=targets,
        reward=R,
        z_noisy=z_noisy,
        z_enhanced=z_enhanced,
    )


def rl_epoch(
    dataset: Sequence[RLUtterance],
    net: Network,
    ctx: RLContext,
    cfg: RLConfig,
    epoch: int = 0,
) -> tuple[Network, EpochStats]:
    """One RL epoch: collect targets for every utterance, then one training pass over them.

    Utterances whose recognition fails are skipped.

    Raises:
        EpochAborted: If more than ``cfg.max_failed_fraction`` of the utterances fail.
    """
    if not dataset:
        raise InvalidSignal("RL dataset is empty")
    ctx.scratch_dir.mkdir(parents=True, exist_ok=True)
    order = make_rng(cfg.seed, epoch).permutation(len(dataset))
    ordered = [dataset[i] for i in order]

    jobs = map_ordered(
        lambda utterance: utterance_targets(utterance, net, ctx, cfg.alpha),
        ordered,
        keys=[utterance.utterance_id for utterance in ordered],
        num_threads=cfg.num_threads,
    )
    outcomes: list[UtteranceOutcome] = []
    failed: list[str] = []
    for job in jobs:
        if job.ok:
            outcomes.append(job.result)
        elif isinstance(job.error, RecognizerFailure):
            logger.warning("Epoch %s: skipping utterance %s: %s", epoch, job.key, job.error.reason)
            failed.append(job.key)
        else:
            raise job.error

    if not outcomes or len(failed) > cfg.max_failed_fraction * len(dataset):
        raise EpochAborted(epoch, failed, len(dataset))

    contexts = np.concatenate([outcome.contexts for outcome in outcomes])
    targets = np.concatenate([outcome.targets for outcome in outcomes])
    result = train(net, contexts, targets, cfg.pass_config(epoch))

    stats = EpochStats(
        epoch=epoch,
        mean_reward=float(np.mean([o.reward for o in outcomes])),
        mean_z_enhanced=float(np.mean([o.z_enhanced for o in outcomes])),
        mean_z_noisy=float(np.mean([o.z_noisy for o in outcomes])),
        loss=result.final_loss,
        scored=len(outcomes),
        failed=failed,
    )
    return result.network, stats


class RLResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    network: Network
    history: list[EpochStats]


class RLTrainer:
    """Runs RL epochs and keeps a CSV log with one row per epoch."""

    def __init__(
        self,
        dataset: Sequence[RLUtterance],
        ctx: RLContext,
        cfg: RLConfig,
        log_path: Optional[PathType] = None,
    ):
        for utterance in dataset:
            utterance.check()
        self.dataset = list(dataset)
        self.ctx = ctx
        self.cfg = cfg
        self.log_path = Path(log_path) if log_path is not None else None

    def _open_log(self):
        if self.log_path is None:
            return None
        self.log_path.parent.mkdir(parents=True, exist_ok=True)
        f = open(self.log_path, "w", newline="", encoding="utf-8")
        csv.writer(f, lineterminator="\n").writerow(EPOCH_LOG_COLUMNS)
        f.flush()
        return f

    def run(self, net: Network) -> RLResult:
        """Train ``net`` for ``cfg.epochs`` epochs; the log keeps the finished epochs on abort."""
        if net.output_dim != self.ctx.codebook.A:
            raise DimensionMismatch("action vector length", self.ctx.codebook.A, net.output_dim)

        history: list[EpochStats] = []
        log_file = self._open_log()
        try:
            for epoch in range(self.cfg.epochs):
                net, stats = rl_epoch(self.dataset, net, self.ctx, self.cfg, epoch)
                history.append(stats)
                logger.info(
                    "RL epoch %s/%s: mean R %.4f, z_enhanced %.4f (noisy %.4f), loss %.6g",
                    epoch + 1,
                    self.cfg.epochs,
                    stats.mean_reward,
                    stats.mean_z_enhanced,
                    stats.mean_z_noisy,
                    stats.loss,
                )
                if log_file is not None:
                    csv.writer(log_file, lineterminator="\n").writerow(stats.as_row())
                    log_file.flush()
        finally:
            if log_file is not None:
                log_file.close()
        return RLResult(network=net, history=history)
