"""Exceptions for rlmask"""

from typing import Any, Optional, Sequence


class DimensionMismatch(ValueError):
    """Raised when two arrays that must agree in shape do not."""

    def __init__(self, what: str, expected: Any, actual: Any):
        self.what = what
        self.expected = expected
        self.actual = actual

    def __str__(self) -> str:
        return "Dimension mismatch in {}: expected {}, got {}".format(
            self.what, self.expected, self.actual
        )


class WaveformTooShort(ValueError):
    """Raised when a waveform does not cover a single analysis frame."""

    def __init__(self, length: int, frame_length: int):
        self.length = length
        self.frame_length = frame_length

    def __str__(self) -> str:
        return "Waveform has {} samples, at least one frame of {} samples is required".format(
            self.length, self.frame_length
        )


class InvalidSignal(ValueError):
    """Raised when a signal or feature matrix violates its value constraints."""

    def __init__(self, message: str):
        self.message = message

    def __str__(self) -> str:
        return self.message


class InvalidAudioFile(Exception):
    """Raised when an audio file is missing or is not 16-bit PCM mono at the expected rate."""

    def __init__(self, path: Any, reason: str):
        self.path = path
        self.reason = reason

    def __str__(self) -> str:
        return "Invalid audio file `{}`: {}".format(self.path, self.reason)


class ClusteringError(Exception):
    """Raised when binary k-means cannot run or breaks its monotonicity guarantee."""

    def __init__(self, message: str):
        self.message = message

    def __str__(self) -> str:
        return self.message


class TrainingDiverged(Exception):
    """Raised when the training loss becomes non-finite.

    The parameters at the time of divergence are kept for inspection.
    """

    def __init__(self, epoch: int, batch: int, loss: float, snapshot: Optional[Any] = None):
        self.epoch = epoch
        self.batch = batch
        self.loss = loss
        self.snapshot = snapshot

    def __str__(self) -> str:
        return "Training diverged at epoch {}, batch {}: loss = {}".format(
            self.epoch, self.batch, self.loss
        )


class RecognizerFailure(Exception):
    """Raised when the recognizer cannot produce a result for an utterance."""

    def __init__(self, utterance_id: str, reason: str):
        self.utterance_id = utterance_id
        self.reason = reason

    def __str__(self) -> str:
        return "Recognizer failed on utterance `{}`: {}".format(self.utterance_id, self.reason)


class EpochAborted(Exception):
    """Raised when too many utterances of an RL epoch fail recognition."""

    def __init__(self, epoch: int, failed: Sequence[str], total: int):
        self.epoch = epoch
        self.failed = list(failed)
        self.total = total

    def __str__(self) -> str:
        return "RL epoch {} aborted: {} of {} utterances failed recognition ({})".format(
            self.epoch, len(self.failed), self.total, ", ".join(self.failed)
        )


class ConfigValidationError(ValueError):
    """Raised when an experiment configuration is inconsistent."""

    def __init__(self, message: str):
        self.message = message

    def __str__(self) -> str:
        return "Invalid configuration: {}".format(self.message)


class InsufficientAudio(Exception):
    """Raised when there is not enough audio to build the requested dataset."""

    def __init__(self, what: str, required: int, available: int):
        self.what = what
        self.required = required
        self.available = available

    def __str__(self) -> str:
        return "Insufficient {}: {} required, {} available".format(
            self.what, self.required, self.available
        )


class DatasetError(Exception):
    """Raised when a manifest or a prepared dataset is missing or inconsistent."""

    def __init__(self, message: str):
        self.message = message

    def __str__(self) -> str:
        return self.message


class ModelFormatError(Exception):
    """Raised when a persisted model or codebook file cannot be decoded."""

    def __init__(self, path: Any, reason: str):
        self.path = path
        self.reason = reason

    def __str__(self) -> str:
        return "Cannot read `{}`: {}".format(self.path, self.reason)


class StageNotReady(Exception):
    """Raised when a pipeline stage is requested before its upstream stages are done."""

    def __init__(self, stage: str, missing: Sequence[str]):
        self.stage = stage
        self.missing = list(missing)

    def __str__(self) -> str:
        return "Stage `{}` cannot run before: {}".format(self.stage, ", ".join(self.missing))


class StageDependencyCycleError(Exception):
    """Raised when pipeline stages depend on each other in a cycle."""

    def __init__(self, stages: Sequence[str]):
        self.stages = list(stages)

    def __str__(self) -> str:
        return "Stage dependency cycle among: {}".format(", ".join(self.stages))
