from pathlib import Path

import numpy as np
import pytest

from rlmask.common import OutputActivation
from rlmask.common.exceptions import RecognizerFailure
from rlmask.features import Waveform, write_wav
from rlmask.masks import Codebook
from rlmask.policy import init_network
from rlmask.recognizers import ErrorRate, RecognitionRequest
from rlmask.rl import RLContext, RLUtterance

N_ACTIONS = 4


class ScriptedRecognizer:
    """Scores the unenhanced mixtures and the enhanced outputs with fixed rates."""

    def __init__(self, noisy_rate: float, enhanced_rate: float, failing: frozenset = frozenset()):
        self.noisy_rate = noisy_rate
        self.enhanced_rate = enhanced_rate
        self.failing = failing
        self.requests: list[RecognitionRequest] = []

    def recognize(self, utterance_id, wav_path):
        raise NotImplementedError

    def score(self, request: RecognitionRequest) -> ErrorRate:
        self.requests.append(request)
        if request.utterance_id in self.failing:
            raise RecognizerFailure(request.utterance_id, "scripted failure")
        if Path(request.wav_path).parent.name == "noisy":
            return ErrorRate(value=self.noisy_rate)
        return ErrorRate(value=self.enhanced_rate)


class RLFixtures:
    @pytest.fixture
    def codebook(self, small_extractor):
        rng = np.random.default_rng(5)
        centroids = rng.integers(0, 2, size=(N_ACTIONS, small_extractor.chunk_dim))
        centroids[0] = 1
        return Codebook(centroids=centroids)

    @pytest.fixture
    def policy(self, small_extractor):
        return init_network(
            [small_extractor.input_dim, 8, N_ACTIONS], OutputActivation.SOFTMAX, seed=0
        )

    @pytest.fixture
    def dataset(self, tmp_path, small_extractor, speech, babble):
        utterances = []
        for index in range(4):
            start = 1000 * index
            noise = babble.samples[start : start + len(speech)]
            noisy = Waveform(samples=speech.samples + 0.5 * noise)
            noisy_path = write_wav(tmp_path / "noisy" / "u{}.wav".format(index), noisy)
            features = small_extractor.analyze(noisy)
            clean_chunks = small_extractor.analyze(speech).chunks.chunks
            oracle = np.arange(features.chunks.count) % N_ACTIONS
            utterances.append(
                RLUtterance(
                    utterance_id="u{}".format(index),
                    noisy_path=noisy_path,
                    reference="reference",
                    features=features,
                    clean_chunks=clean_chunks,
                    oracle_actions=oracle,
                )
            )
        return utterances

    @pytest.fixture
    def make_context(self, tmp_path, small_extractor, codebook):
        def make(recognizer) -> RLContext:
            return RLContext(
                extractor=small_extractor,
                codebook=codebook,
                recognizer=recognizer,
                scratch_dir=tmp_path / "scratch",
            )

        return make
