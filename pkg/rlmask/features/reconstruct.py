"""Waveform reconstruction from masked noisy spectra."""

from typing import Optional

import numpy as np

from rlmask.common.exceptions import DimensionMismatch
from rlmask.features.stft import istft
from rlmask.features.types import ComplexSpectrogram, StftConfig, Waveform


def reconstruct(
    noisy: ComplexSpectrogram,
    per_frame_linear_masks: np.ndarray,
    cfg: StftConfig,
    sample_rate: Optional[int] = None,
) -> Waveform:
    """Resynthesize the noisy magnitude, gated by one linear-frequency mask per frame.

    The noisy phase is kept, so ``|Y| * mask * exp(j * angle(Y))`` reduces to ``Y * mask``.
    """
    masks = np.asarray(per_frame_linear_masks, dtype=np.float64)
    if masks.shape != noisy.values.shape:
        raise DimensionMismatch("per-frame masks", noisy.values.shape, masks.shape)

    masked = noisy.magnitude * masks * noisy.phase_factor()
    return istft(ComplexSpectrogram(values=masked), cfg, sample_rate=sample_rate)
