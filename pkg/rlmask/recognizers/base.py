"""Records exchanged with recognizers."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveFloat,
    PositiveInt,
    field_validator,
    model_validator,
)

from rlmask.common import Defaults, RecognizerKind


class Transcript(BaseModel):
    """Recognizer output. Scoring works on its characters with whitespace removed."""

    model_config = ConfigDict(frozen=True)

    text: str

    @property
    def tokens(self) -> list[str]:
        return [char for char in self.text if not char.isspace()]

    def __len__(self) -> int:
        return len(self.tokens)


class ErrorRate(BaseModel):
    """Utterance error rate as a fraction; insertions can push it above 1."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(ge=0.0)

    @field_validator("value")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("error rate must be finite")
        return value

    def __float__(self) -> float:
        return self.value


class RecognizerEndpoint(BaseModel):
    """How to reach a recognizer.

    Attributes:
        kind: ``external`` for a child process speaking the JSON-lines protocol, ``mock`` for
            the built-in spectral-distance recognizer.
        command: Launch command of the external process.
        timeout: Seconds to wait for one response.
        pool_size: Number of external processes serving requests in parallel.
        calibration_lsd: Log-spectral distance mapped to error rate 1 by the mock.
    """

    model_config = ConfigDict(frozen=True)

    kind: str = Defaults.RECOGNIZER_KIND
    command: Optional[list[str]] = None
    timeout: PositiveFloat = Defaults.RECOGNIZER_TIMEOUT
    pool_size: PositiveInt = Defaults.RECOGNIZER_POOL_SIZE
    calibration_lsd: Optional[PositiveFloat] = None

    @model_validator(mode="after")
    def _check_kind(self) -> RecognizerEndpoint:
        if self.kind not in RecognizerKind.ALL:
            raise ValueError("unknown recognizer kind `{}`".format(self.kind))
        if self.kind == RecognizerKind.EXTERNAL and not self.command:
            raise ValueError("an external recognizer needs a launch command")
        return self


class RecognitionRequest(BaseModel):
    """One utterance to score.

    ``reference`` is the reference transcript for external decoders and the path of the clean
    reference WAV for the mock.
    """

    model_config = ConfigDict(frozen=True)

    utterance_id: str
    wav_path: Path
    reference: str
