"""Mel filterbank construction, mel power features and mel-to-linear mask projection."""

import librosa
import numpy as np

from rlmask.common import Defaults
from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.common.types import BitArray
from rlmask.features.types import ComplexSpectrogram, MelFilterbank, MelPowerSpectrogram


def make_mel_filterbank(
    n_mels: int = Defaults.N_MELS,
    sample_rate: int = Defaults.SAMPLE_RATE,
    frame_length: int = Defaults.FRAME_LENGTH,
) -> MelFilterbank:
    """Triangular filters spanning 0 Hz to Nyquist, each with unit peak (no area normalization)."""
    weights = librosa.filters.mel(
        sr=sample_rate,
        n_fft=frame_length,
        n_mels=n_mels,
        fmin=0.0,
        fmax=sample_rate / 2.0,
        htk=False,
        norm=None,
        dtype=np.float64,
    )
    return MelFilterbank(weights=weights, sample_rate=sample_rate)


def mel_power(spec: ComplexSpectrogram, fb: MelFilterbank) -> MelPowerSpectrogram:
    """Mel power spectrogram: filterbank weights applied to the squared STFT magnitude."""
    if fb.bins != spec.bins:
        raise DimensionMismatch("mel filterbank bins", spec.bins, fb.bins)
    return MelPowerSpectrogram(values=spec.power @ fb.weights.T)


def project_mask_to_linear(mel_mask: np.ndarray, fb: MelFilterbank) -> BitArray:
    """Spread a mel-band mask onto STFT bins.

    Every bin takes the value of the band with the largest filter weight at that bin, ties
    going to the lower band. Accepts a single mask or a ``frames x n_mels`` stack.
    """
    mel_mask = np.asarray(mel_mask)
    if mel_mask.shape[-1] != fb.n_mels:
        raise DimensionMismatch("mel mask length", fb.n_mels, mel_mask.shape[-1])
    if not np.all((mel_mask == 0) | (mel_mask == 1)):
        raise InvalidSignal("mel mask must be binary")
    return mel_mask[..., fb.dominant_band].astype(np.uint8)
