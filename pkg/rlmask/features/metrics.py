"""Objective quality metrics: segmental SNR and log-spectral distance."""

import numpy as np

from rlmask.common import Defaults
from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.features.types import MelPowerSpectrogram, Waveform

EPS = 1e-12


def trim_to_common(*signals: np.ndarray) -> list[np.ndarray]:
    length = min(len(s) for s in signals)
    return [np.asarray(s)[:length] for s in signals]


def segmental_snr(
    clean: Waveform,
    processed: Waveform,
    frame_length: int = Defaults.FRAME_LENGTH,
    min_db: float = Defaults.SEGSNR_MIN_DB,
    max_db: float = Defaults.SEGSNR_MAX_DB,
) -> float:
    """Mean over non-overlapping frames of the clamped per-frame SNR, in dB."""
    reference, test = trim_to_common(clean.samples, processed.samples)
    n_frames = len(reference) // frame_length
    if n_frames == 0:
        raise InvalidSignal("signals shorter than one {}-sample frame".format(frame_length))

    reference = reference[: n_frames * frame_length].reshape(n_frames, frame_length)
    error = reference - test[: n_frames * frame_length].reshape(n_frames, frame_length)
    signal_energy = np.sum(reference**2, axis=1)
    error_energy = np.sum(error**2, axis=1)
    per_frame = 10.0 * np.log10((signal_energy + EPS) / (error_energy + EPS))
    return float(np.mean(np.clip(per_frame, min_db, max_db)))


def log_spectral_distance(
    reference: MelPowerSpectrogram,
    test: MelPowerSpectrogram,
    dynamic_range_db: float = Defaults.LSD_DYNAMIC_RANGE_DB,
) -> float:
    """Mean over frames of the RMS difference of dB power spectra.

    Both spectra are floored at ``dynamic_range_db`` below the reference peak, so bands
    where the reference is silent compare equal to any output that is silent there too.

    Raises:
        InvalidSignal: If the reference carries no energy.
    """
    if reference.n_mels != test.n_mels:
        raise DimensionMismatch("mel bands", reference.n_mels, test.n_mels)
    peak = float(np.max(reference.values)) if reference.frames else 0.0
    if peak <= 0.0:
        raise InvalidSignal("reference spectrum is silent")

    frames = min(reference.frames, test.frames)
    floor = peak * 10.0 ** (-dynamic_range_db / 10.0)
    reference_db = 10.0 * np.log10(np.maximum(reference.values[:frames], floor))
    test_db = 10.0 * np.log10(np.maximum(test.values[:frames], floor))
    return float(np.mean(np.sqrt(np.mean((reference_db - test_db) ** 2, axis=1))))
