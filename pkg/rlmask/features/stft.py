"""Short-time Fourier analysis and weighted overlap-add synthesis."""

from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from rlmask.common.exceptions import DimensionMismatch, WaveformTooShort
from rlmask.features.types import ComplexSpectrogram, StftConfig, Waveform

# Overlap-add positions whose summed squared window falls below this are left at zero.
WINDOW_SUM_TOLERANCE = 1e-12


def stft(waveform: Waveform, cfg: StftConfig) -> ComplexSpectrogram:
    """Frame, window and transform a waveform.

    Only full frames are analysed: the result has ``1 + (len - frame_length) // hop`` rows and
    ``frame_length // 2 + 1`` columns.

    Raises:
        WaveformTooShort: If the waveform is shorter than one frame.
    """
    n_samples = len(waveform)
    if n_samples < cfg.frame_length:
        raise WaveformTooShort(n_samples, cfg.frame_length)

    frames = sliding_window_view(waveform.samples, cfg.frame_length)[:: cfg.hop]
    values = np.fft.rfft(frames * cfg.analysis_window, n=cfg.frame_length, axis=1)
    return ComplexSpectrogram(values=values)


def istft(spec: ComplexSpectrogram, cfg: StftConfig, sample_rate: Optional[int] = None) -> Waveform:
    """Inverse transform by weighted overlap-add.

    Every inverse frame is multiplied by the analysis window again and the sum is divided by
    the overlapped squared window, so ``istft(stft(w))`` equals ``w`` wherever that sum is
    nonzero.
    """
    if spec.bins != cfg.n_bins:
        raise DimensionMismatch("istft bins", cfg.n_bins, spec.bins)

    window = cfg.analysis_window
    frames = np.fft.irfft(spec.values, n=cfg.frame_length, axis=1) * window

    n_samples = cfg.n_samples(spec.frames)
    output = np.zeros(n_samples)
    window_sum = np.zeros(n_samples)
    squared_window = window**2
    for index in range(spec.frames):
        start = index * cfg.hop
        output[start : start + cfg.frame_length] += frames[index]
        window_sum[start : start + cfg.frame_length] += squared_window

    covered = window_sum > WINDOW_SUM_TOLERANCE
    output[covered] /= window_sum[covered]
    output[~covered] = 0.0

    kwargs = {} if sample_rate is None else {"sample_rate": sample_rate}
    return Waveform(samples=output, **kwargs)


def interior_slice(n_frames: int, cfg: StftConfig) -> slice:
    """Samples covered by ``frame_length / hop`` overlapping frames, i.e. away from both edges."""
    margin = cfg.frame_length - cfg.hop
    return slice(margin, max(margin, cfg.n_samples(n_frames) - margin))
