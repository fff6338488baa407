import numpy as np
import pytest

from rlmask.common import configure_logging
from rlmask.common.utils import make_rng
from rlmask.features import FeatureExtractor
from rlmask.pipeline.synthetic import SynthConfig, synth_noise, synth_utterance

configure_logging(verbose=False)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_extractor():
    """16 mel bands, single-frame chunks, 3-chunk contexts."""
    return FeatureExtractor.create(n_mels=16, p=1, F=3)


@pytest.fixture(scope="session")
def speech():
    waveform, _ = synth_utterance(SynthConfig(min_syllables=3, max_syllables=3), make_rng(7))
    return waveform


@pytest.fixture(scope="session")
def babble():
    return synth_noise(SynthConfig(noise_seconds=4.0), make_rng(8))
