"""Recognizer construction from a configured endpoint."""

from typing import Mapping, Optional, Union

from rlmask.common import RecognizerKind
from rlmask.common.exceptions import InvalidSignal
from rlmask.common.types import PathType
from rlmask.features import FeatureExtractor
from rlmask.recognizers.base import RecognizerEndpoint
from rlmask.recognizers.external import ExternalRecognizerPool, RetryConfig
from rlmask.recognizers.mock import MockRecognizer


def open_recognizer(
    endpoint: RecognizerEndpoint,
    extractor: Optional[FeatureExtractor] = None,
    references: Optional[Mapping[str, PathType]] = None,
    retry_config: Optional[RetryConfig] = None,
) -> Union[MockRecognizer, ExternalRecognizerPool]:
    """Recognizer for an endpoint; the caller closes external pools."""
    if endpoint.kind == RecognizerKind.MOCK:
        if endpoint.calibration_lsd is None:
            raise InvalidSignal("the mock recognizer is not calibrated")
        return MockRecognizer(endpoint.calibration_lsd, extractor, references)
    return ExternalRecognizerPool(endpoint, retry_config)
