"""Utterance and chunk rewards computed from recognizer error rates."""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, field_validator, model_validator

from rlmask.common import Defaults
from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.common.types import FloatArray
from rlmask.common.utils import safe_log


class RewardInputs(BaseModel):
    """Error rates (as fractions) of the unenhanced and enhanced utterance."""

    model_config = ConfigDict(frozen=True)

    z_noisy: float = Field(ge=0.0)
    z_enhanced: float = Field(ge=0.0)
    alpha: PositiveFloat = Defaults.REWARD_ALPHA

    @field_validator("z_noisy", "z_enhanced", "alpha")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("reward inputs must be finite")
        return value


def utterance_reward(ri: RewardInputs) -> float:
    """``tanh(alpha * (z_noisy - z_enhanced))``; positive when enhancement lowered the error."""
    return math.tanh(ri.alpha * (ri.z_noisy - ri.z_enhanced))


class ChunkErrorProfile(BaseModel):
    """Per-chunk squared log-spectral errors and their max-normalized version."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    raw: np.ndarray
    normalized: np.ndarray

    @model_validator(mode="after")
    def _check(self) -> ChunkErrorProfile:
        if self.raw.shape != self.normalized.shape or self.raw.ndim != 1:
            raise ValueError("raw and normalized errors must be vectors of equal length")
        if np.any(self.raw < 0):
            raise ValueError("chunk errors must be nonnegative")
        if np.any(self.normalized < 0) or np.any(self.normalized > 1):
            raise ValueError("normalized chunk errors must lie in [0, 1]")
        return self

    def __len__(self) -> int:
        return int(self.raw.shape[0])


def chunk_errors(clean_chunks: np.ndarray, enhanced_chunks: np.ndarray) -> ChunkErrorProfile:
    """Squared L2 distance of log chunks, normalized by the largest one (all zeros if it is 0)."""
    clean_chunks = np.atleast_2d(np.asarray(clean_chunks, dtype=np.float64))
    enhanced_chunks = np.atleast_2d(np.asarray(enhanced_chunks, dtype=np.float64))
    if clean_chunks.shape != enhanced_chunks.shape:
        raise DimensionMismatch("chunk error operands", clean_chunks.shape, enhanced_chunks.shape)

    raw = np.sum((safe_log(clean_chunks) - safe_log(enhanced_chunks)) ** 2, axis=1)
    peak = raw.max(initial=0.0)
    normalized = raw / peak if peak > 0 else np.zeros_like(raw)
    return ChunkErrorProfile(raw=raw, normalized=normalized)


def chunk_reward(E_norm: float, R: float) -> float:
    """``(1 - E) * R`` for a positive reward, ``E * R`` otherwise.

    Well-reconstructed chunks share most of a gain; badly reconstructed chunks take most of
    a loss.
    """
    if not 0.0 <= E_norm <= 1.0:
        raise InvalidSignal("normalized chunk error {} is outside [0, 1]".format(E_norm))
    if R > 0:
        return (1.0 - E_norm) * R
    return E_norm * R


def chunk_rewards(profile: ChunkErrorProfile, R: float) -> FloatArray:
    """``chunk_reward`` over all chunks of an utterance."""
    weights = 1.0 - profile.normalized if R > 0 else profile.normalized
    return weights * R
