"""Data records of the feature pipeline: waveforms, spectrograms, filterbanks and chunks."""

from __future__ import annotations

from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator
from scipy.signal import check_COLA, get_window

from rlmask.common import Defaults
from rlmask.common.types import ComplexArray, FloatArray


def _frozen_array(value, dtype) -> np.ndarray:
    array = np.array(value, dtype=dtype)
    array.setflags(write=False)
    return array


class ArrayModel(BaseModel):
    """Base for immutable records that carry numpy arrays."""

    model_config = ConfigDict(
        arbitrary_types_allowed=True, frozen=True, ignored_types=(cached_property,)
    )


class Waveform(ArrayModel):
    """Time-domain audio.

    Attributes:
        samples: Real amplitudes, nominally in [-1, 1].
        sample_rate: Samples per second.
    """

    samples: np.ndarray
    sample_rate: PositiveInt = Defaults.SAMPLE_RATE

    @field_validator("samples", mode="before")
    @classmethod
    def _check_samples(cls, value):
        array = _frozen_array(value, np.float64)
        if array.ndim != 1:
            raise ValueError("samples must be one-dimensional, got shape {}".format(array.shape))
        if not np.all(np.isfinite(array)):
            raise ValueError("samples must be finite")
        return array

    def __len__(self) -> int:
        return int(self.samples.shape[0])


class StftConfig(ArrayModel):
    """Short-time Fourier transform parameters.

    The window is built with ``scipy.signal.get_window``, which returns the periodic
    variant suitable for spectral analysis.
    """

    frame_length: PositiveInt = Defaults.FRAME_LENGTH
    hop: PositiveInt = Defaults.HOP_LENGTH
    window: str = Defaults.WINDOW

    @model_validator(mode="after")
    def _check_overlap(self) -> StftConfig:
        if self.hop > self.frame_length:
            raise ValueError(
                "hop ({}) must not exceed frame_length ({})".format(self.hop, self.frame_length)
            )
        if not check_COLA(self.analysis_window, self.frame_length, self.frame_length - self.hop):
            raise ValueError(
                "window `{}` does not satisfy constant overlap-add at hop {}".format(
                    self.window, self.hop
                )
            )
        return self

    @cached_property
    def analysis_window(self) -> FloatArray:
        window = get_window(self.window, self.frame_length, fftbins=True).astype(np.float64)
        window.setflags(write=False)
        return window

    @property
    def n_bins(self) -> int:
        return self.frame_length // 2 + 1

    def n_frames(self, n_samples: int) -> int:
        """Number of full frames that fit into ``n_samples`` samples."""
        return 1 + (n_samples - self.frame_length) // self.hop

    def n_samples(self, n_frames: int) -> int:
        """Length of the overlap-add synthesis of ``n_frames`` frames."""
        return self.frame_length + (n_frames - 1) * self.hop


class ComplexSpectrogram(ArrayModel):
    """STFT values, one row per frame and one column per frequency bin."""

    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _check_values(cls, value):
        array = _frozen_array(value, np.complex128)
        if array.ndim != 2:
            raise ValueError(
                "spectrogram must be two-dimensional, got shape {}".format(array.shape)
            )
        if not np.all(np.isfinite(array)):
            raise ValueError("spectrogram values must be finite")
        return array

    @property
    def frames(self) -> int:
        return int(self.values.shape[0])

    @property
    def bins(self) -> int:
        return int(self.values.shape[1])

    @property
    def magnitude(self) -> FloatArray:
        return np.abs(self.values)

    @property
    def power(self) -> FloatArray:
        return np.abs(self.values) ** 2

    def phase_factor(self) -> ComplexArray:
        """Unit-modulus phase term of every value (1 where the magnitude is zero)."""
        magnitude = self.magnitude
        with np.errstate(invalid="ignore", divide="ignore"):
            phase = np.where(magnitude > 0, self.values / np.where(magnitude > 0, magnitude, 1), 1)
        return phase.astype(np.complex128)


class MelFilterbank(ArrayModel):
    """Triangular mel filterbank mapping STFT power bins to mel bands.

    Attributes:
        weights: ``n_mels x bins`` nonnegative matrix.
        sample_rate: Sample rate the filterbank was built for.
    """

    weights: np.ndarray
    sample_rate: PositiveInt = Defaults.SAMPLE_RATE

    @field_validator("weights", mode="before")
    @classmethod
    def _check_weights(cls, value):
        array = _frozen_array(value, np.float64)
        if array.ndim != 2:
            raise ValueError("filterbank must be two-dimensional")
        if np.any(array < 0) or not np.all(np.isfinite(array)):
            raise ValueError("filterbank weights must be finite and nonnegative")
        empty = np.flatnonzero(array.max(axis=1) <= 0)
        if empty.size:
            raise ValueError("mel bands {} have no positive weight".format(empty.tolist()))
        return array

    @property
    def n_mels(self) -> int:
        return int(self.weights.shape[0])

    @property
    def bins(self) -> int:
        return int(self.weights.shape[1])

    @cached_property
    def dominant_band(self) -> np.ndarray:
        """Index of the band with the largest weight at every STFT bin (lowest index on ties)."""
        return np.argmax(self.weights, axis=0)


class MelPowerSpectrogram(ArrayModel):
    """Mel power spectrogram, ``frames x n_mels`` nonnegative values."""

    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _check_values(cls, value):
        array = _frozen_array(value, np.float64)
        if array.ndim != 2:
            raise ValueError("mel power spectrogram must be two-dimensional")
        if np.any(array < 0) or not np.all(np.isfinite(array)):
            raise ValueError("mel power values must be finite and nonnegative")
        return array

    @property
    def frames(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_mels(self) -> int:
        return int(self.values.shape[1])


class ChunkSequence(ArrayModel):
    """Chunk vectors: every row concatenates ``p`` consecutive mel frames.

    Attributes:
        p: Frames per chunk.
        n_mels: Mel bands per frame.
        n_frames: Frame count before padding.
        chunks: ``C x (p * n_mels)`` matrix.
    """

    p: PositiveInt
    n_mels: PositiveInt
    n_frames: int = Field(ge=0)
    chunks: np.ndarray

    @field_validator("chunks", mode="before")
    @classmethod
    def _check_chunks(cls, value):
        array = _frozen_array(value, np.float64)
        if array.ndim != 2:
            raise ValueError("chunks must be two-dimensional")
        return array

    @model_validator(mode="after")
    def _check_layout(self) -> ChunkSequence:
        if self.chunks.shape[1] != self.p * self.n_mels:
            raise ValueError(
                "chunk dimension {} != p * n_mels = {}".format(
                    self.chunks.shape[1], self.p * self.n_mels
                )
            )
        if self.count * self.p < self.n_frames:
            raise ValueError("chunks do not cover all {} frames".format(self.n_frames))
        return self

    @property
    def count(self) -> int:
        return int(self.chunks.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.chunks.shape[1])
