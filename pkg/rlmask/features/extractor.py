"""One-stop feature extraction for an utterance."""

from __future__ import annotations

from typing import Optional

import numpy as np
from pydantic import PositiveInt

from rlmask.common import Defaults
from rlmask.common.exceptions import InvalidAudioFile
from rlmask.features.chunks import chunk_masks_to_frames, make_chunks, make_context
from rlmask.features.mel import make_mel_filterbank, mel_power, project_mask_to_linear
from rlmask.features.reconstruct import reconstruct
from rlmask.features.stft import stft
from rlmask.features.types import (
    ArrayModel,
    ChunkSequence,
    ComplexSpectrogram,
    MelFilterbank,
    MelPowerSpectrogram,
    StftConfig,
    Waveform,
)


class UtteranceFeatures(ArrayModel):
    """Analysis of one waveform at one chunking setting."""

    spec: ComplexSpectrogram
    mps: MelPowerSpectrogram
    chunks: ChunkSequence
    contexts: np.ndarray


class FeatureExtractor(ArrayModel):
    """Binds the STFT settings, mel filterbank and chunk/context sizes together.

    Attributes:
        stft_config: Analysis settings.
        filterbank: Mel filterbank matched to ``stft_config``.
        p: Frames per chunk.
        F: Chunks per context vector.
        sample_rate: Expected audio rate.
    """

    stft_config: StftConfig
    filterbank: MelFilterbank
    p: PositiveInt = Defaults.CHUNK_FRAMES
    F: PositiveInt = Defaults.CONTEXT_CHUNKS[Defaults.CHUNK_FRAMES]
    sample_rate: PositiveInt = Defaults.SAMPLE_RATE

    @classmethod
    def create(
        cls,
        stft_config: Optional[StftConfig] = None,
        n_mels: int = Defaults.N_MELS,
        p: int = Defaults.CHUNK_FRAMES,
        F: Optional[int] = None,
        sample_rate: int = Defaults.SAMPLE_RATE,
    ) -> FeatureExtractor:
        stft_config = stft_config or StftConfig()
        filterbank = make_mel_filterbank(n_mels, sample_rate, stft_config.frame_length)
        if F is None:
            F = Defaults.CONTEXT_CHUNKS.get(p, Defaults.FALLBACK_CONTEXT_FRAMES)
        return cls(
            stft_config=stft_config, filterbank=filterbank, p=p, F=F, sample_rate=sample_rate
        )

    @property
    def n_mels(self) -> int:
        return self.filterbank.n_mels

    @property
    def chunk_dim(self) -> int:
        return self.p * self.n_mels

    @property
    def input_dim(self) -> int:
        return self.F * self.p * self.n_mels

    def check_rate(self, waveform: Waveform) -> None:
        if waveform.sample_rate != self.sample_rate:
            raise InvalidAudioFile(
                "<memory>",
                "expected {} Hz, got {} Hz".format(self.sample_rate, waveform.sample_rate),
            )

    def mel_spectrogram(self, waveform: Waveform) -> MelPowerSpectrogram:
        self.check_rate(waveform)
        return mel_power(stft(waveform, self.stft_config), self.filterbank)

    def analyze(self, waveform: Waveform) -> UtteranceFeatures:
        self.check_rate(waveform)
        spec = stft(waveform, self.stft_config)
        mps = mel_power(spec, self.filterbank)
        chunks = make_chunks(mps, self.p)
        return UtteranceFeatures(
            spec=spec, mps=mps, chunks=chunks, contexts=make_context(chunks, self.F)
        )

    def chunk(self, mps: MelPowerSpectrogram) -> ChunkSequence:
        return make_chunks(mps, self.p)

    def apply_chunk_masks(self, features: UtteranceFeatures, chunk_masks: np.ndarray) -> Waveform:
        """Mask the noisy spectrum with one mel mask per chunk and resynthesize."""
        frame_masks = chunk_masks_to_frames(
            chunk_masks, self.p, self.n_mels, features.spec.frames
        )
        linear_masks = project_mask_to_linear(frame_masks, self.filterbank)
        return reconstruct(features.spec, linear_masks, self.stft_config, self.sample_rate)
