"""JSON-lines wire protocol of external recognizer processes.

The parent writes one request per line to the child's stdin::

    {"id": "utt1", "wav": "/path/to/utt1.wav"}

and reads one response per line from its stdout, either::

    {"id": "utt1", "transcript": "..."}

or::

    {"id": "utt1", "error": "..."}

Lines are UTF-8; the child flushes after every response.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator


class ProtocolError(ValueError):
    """Raised when a protocol line cannot be decoded."""

    def __init__(self, line: str, reason: str):
        self.line = line
        self.reason = reason

    def __str__(self) -> str:
        return "Malformed recognizer record {!r}: {}".format(self.line[:200], self.reason)


class RecognizeRequest(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str
    wav: str


class RecognizeResponse(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str
    transcript: Optional[str] = None
    error: Optional[str] = None

    @model_validator(mode="after")
    def _one_of(self) -> RecognizeResponse:
        if (self.transcript is None) == (self.error is None):
            raise ValueError("exactly one of `transcript` and `error` must be present")
        return self

    @property
    def ok(self) -> bool:
        return self.error is None


def _encode(record: BaseModel) -> str:
    # non-ASCII characters stay unescaped; embedded newlines are escaped
    return record.model_dump_json(exclude_none=True) + "\n"


def encode_request(request: RecognizeRequest) -> str:
    return _encode(request)


def encode_response(response: RecognizeResponse) -> str:
    return _encode(response)


def _decode(model: type[BaseModel], line: str):
    line = line.rstrip("\r\n")
    if not line.strip():
        raise ProtocolError(line, "empty line")
    try:
        return model.model_validate_json(line)
    except ValidationError as e:
        raise ProtocolError(line, str(e)) from e


def decode_request(line: str) -> RecognizeRequest:
    return _decode(RecognizeRequest, line)


def decode_response(line: str) -> RecognizeResponse:
    return _decode(RecognizeResponse, line)
