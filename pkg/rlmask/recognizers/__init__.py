"""Black-box recognizers: external decoders, the mock recognizer, and CER scoring."""

from .base import ErrorRate, RecognitionRequest, RecognizerEndpoint, Transcript
from .batch import (
    BatchResult,
    batch_recognize,
    read_recognition_manifest,
    write_recognition_manifest,
)
from .cer import EditCounts, cer, edit_counts, edit_distance
from .external import ExternalRecognizer, ExternalRecognizerPool, RetryConfig
from .factory import open_recognizer
from .mock import MockRecognizer, calibrate_mock, mock_error_rate
from .protocol import (
    ProtocolError,
    RecognizeRequest,
    RecognizeResponse,
    decode_request,
    decode_response,
    encode_request,
    encode_response,
)

__all__ = [
    "BatchResult",
    "EditCounts",
    "ErrorRate",
    "ExternalRecognizer",
    "ExternalRecognizerPool",
    "MockRecognizer",
    "ProtocolError",
    "RecognitionRequest",
    "RecognizeRequest",
    "RecognizeResponse",
    "RecognizerEndpoint",
    "RetryConfig",
    "Transcript",
    "batch_recognize",
    "calibrate_mock",
    "cer",
    "decode_request",
    "decode_response",
    "edit_counts",
    "edit_distance",
    "encode_request",
    "encode_response",
    "mock_error_rate",
    "open_recognizer",
    "read_recognition_manifest",
    "write_recognition_manifest",
]
