import sys
from pathlib import Path

import pytest

from rlmask.common import RecognizerKind
from rlmask.recognizers import RecognizerEndpoint

SCRIPTED_RECOGNIZER = Path(__file__).parent / "scripted_recognizer.py"


class RecognizerFixtures:
    @pytest.fixture
    def endpoint(self):
        return RecognizerEndpoint(
            kind=RecognizerKind.EXTERNAL,
            command=[sys.executable, str(SCRIPTED_RECOGNIZER)],
            timeout=5.0,
        )

    @staticmethod
    def touch_wav(directory: Path, stem: str) -> Path:
        path = directory / "{}.wav".format(stem)
        path.write_bytes(b"")
        return path
