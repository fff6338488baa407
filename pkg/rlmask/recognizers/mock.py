"""Deterministic stand-in recognizer driven by log-spectral distance to the clean reference."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping, Optional

import numpy as np

from rlmask.common import Defaults, logger
from rlmask.common.exceptions import InvalidAudioFile, InvalidSignal, RecognizerFailure
from rlmask.common.types import PathType
from rlmask.common.utils import generate_hex_hash, make_rng
from rlmask.features import FeatureExtractor, Waveform, log_spectral_distance, read_wav
from rlmask.features.metrics import trim_to_common
from rlmask.recognizers.base import ErrorRate, RecognitionRequest, Transcript

PSEUDO_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def _trimmed(waveform: Waveform, length: int) -> Waveform:
    return Waveform(samples=waveform.samples[:length], sample_rate=waveform.sample_rate)


def utterance_lsd(enhanced: Waveform, clean_ref: Waveform, extractor: FeatureExtractor) -> float:
    """Log-spectral distance between two waveforms trimmed to their common length."""
    enhanced_samples, _ = trim_to_common(enhanced.samples, clean_ref.samples)
    length = len(enhanced_samples)
    return log_spectral_distance(
        extractor.mel_spectrogram(_trimmed(clean_ref, length)),
        extractor.mel_spectrogram(_trimmed(enhanced, length)),
    )


def mock_error_rate(
    enhanced: Waveform,
    clean_ref: Waveform,
    calibration_lsd: float,
    extractor: Optional[FeatureExtractor] = None,
) -> ErrorRate:
    """Pseudo error rate ``clamp01(LSD / calibration_lsd)``.

    Raises:
        InvalidSignal: If the reference is silent or the calibration is not positive.
    """
    if not calibration_lsd > 0:
        raise InvalidSignal("calibration distance must be positive, got {}".format(calibration_lsd))
    extractor = extractor or FeatureExtractor.create(sample_rate=clean_ref.sample_rate)
    lsd = utterance_lsd(enhanced, clean_ref, extractor)
    return ErrorRate(value=float(np.clip(lsd / calibration_lsd, 0.0, 1.0)))


def calibrate_mock(
    pairs: Iterable[tuple[Waveform, Waveform]],
    extractor: Optional[FeatureExtractor] = None,
    percentile: float = Defaults.MOCK_CALIBRATION_PERCENTILE,
) -> float:
    """Percentile of the noisy-vs-clean distances over ``(noisy, clean)`` training pairs."""
    distances = []
    for noisy, clean in pairs:
        extractor = extractor or FeatureExtractor.create(sample_rate=clean.sample_rate)
        distances.append(utterance_lsd(noisy, clean, extractor))
    if not distances:
        raise InvalidSignal("mock calibration needs at least one training pair")

    calibration = float(np.percentile(distances, percentile))
    if calibration <= 0:
        raise InvalidSignal("noisy training pairs are indistinguishable from clean speech")
    logger.info(
        "Mock recognizer calibrated on %s pairs: LSD %.4f dB at the %sth percentile",
        len(distances),
        calibration,
        percentile,
    )
    return calibration


class MockRecognizer:
    """Scores enhanced audio by its spectral distance to the clean reference.

    ``score`` takes the clean WAV path as the request reference. ``recognize`` emits a
    pseudo-transcript whose CER against ``reference_transcript`` equals the pseudo error rate
    up to rounding to ``1 / transcript_length``; it needs the clean path of the utterance from
    ``references``.
    """

    def __init__(
        self,
        calibration_lsd: float,
        extractor: Optional[FeatureExtractor] = None,
        references: Optional[Mapping[str, PathType]] = None,
        transcript_length: int = Defaults.MOCK_TRANSCRIPT_LENGTH,
    ):
        if not calibration_lsd > 0:
            raise InvalidSignal("calibration distance must be positive")
        self.calibration_lsd = calibration_lsd
        self.extractor = extractor or FeatureExtractor.create()
        self.references = {key: Path(value) for key, value in (references or {}).items()}
        self.transcript_length = transcript_length

    def __repr__(self):
        return "MockRecognizer(calibration_lsd={:.4f})".format(self.calibration_lsd)

    def __enter__(self) -> MockRecognizer:
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def close(self) -> None:
        """Nothing to release; present so callers can treat every recognizer alike."""

    def _read(self, utterance_id: str, path: PathType) -> Waveform:
        try:
            return read_wav(path, self.extractor.sample_rate)
        except InvalidAudioFile as e:
            raise RecognizerFailure(utterance_id, str(e)) from e

    def error_rate(self, utterance_id: str, wav_path: PathType, clean_path: PathType) -> ErrorRate:
        enhanced = self._read(utterance_id, wav_path)
        clean = self._read(utterance_id, clean_path)
        try:
            return mock_error_rate(enhanced, clean, self.calibration_lsd, self.extractor)
        except ValueError as e:
            raise RecognizerFailure(utterance_id, str(e)) from e

    def score(self, request: RecognitionRequest) -> ErrorRate:
        return self.error_rate(request.utterance_id, request.wav_path, request.reference)

    def reference_transcript(self, utterance_id: str) -> Transcript:
        rng = make_rng(int(generate_hex_hash(utterance_id.encode("utf-8"), 8), 16))
        letters = rng.integers(0, len(PSEUDO_ALPHABET), size=self.transcript_length)
        return Transcript(text="".join(PSEUDO_ALPHABET[i] for i in letters))

    def recognize(self, utterance_id: str, wav_path: PathType) -> Transcript:
        if utterance_id not in self.references:
            raise RecognizerFailure(utterance_id, "no clean reference registered")
        rate = self.error_rate(utterance_id, wav_path, self.references[utterance_id]).value

        reference = self.reference_transcript(utterance_id).text
        n_errors = int(round(rate * self.transcript_length))
        rng = make_rng(int(generate_hex_hash(utterance_id.encode("utf-8"), 8), 16), 1)
        positions = set(rng.choice(self.transcript_length, size=n_errors, replace=False).tolist())
        chars = [
            PSEUDO_ALPHABET[(PSEUDO_ALPHABET.index(c) + 1) % len(PSEUDO_ALPHABET)]
            if i in positions
            else c
            for i, c in enumerate(reference)
        ]
        return Transcript(text="".join(chars))
