"""Array aliases and type protocols used in rlmask.

Attributes:
    FloatArray: Real-valued numpy array (float64).
    ComplexArray: Complex-valued numpy array (complex128).
    BitArray: Binary numpy array stored as uint8 with values in {0, 1}.
    IndexArray: Integer index array.
"""

from __future__ import annotations

from os import PathLike
from typing import TYPE_CHECKING, Protocol, Union

import numpy as np
import numpy.typing as npt

if TYPE_CHECKING:
    from rlmask.recognizers.base import ErrorRate, RecognitionRequest, Transcript


FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
BitArray = npt.NDArray[np.uint8]
IndexArray = npt.NDArray[np.int64]

PathType = Union[str, "PathLike[str]"]


class Recognizer(Protocol):
    """Type protocol for a black-box recognizer.

    ``recognize`` turns a WAV file into a transcript; ``score`` turns a recognition request
    (WAV file plus reference) into an utterance error rate. The mock recognizer implements
    ``score`` directly, external decoders go through ``recognize`` and CER scoring.
    """

    def recognize(self, utterance_id: str, wav_path: PathType) -> Transcript: ...

    def score(self, request: RecognitionRequest) -> ErrorRate: ...
