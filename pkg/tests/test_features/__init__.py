import numpy as np
import pytest

from rlmask.features import StftConfig, Waveform


class FeatureFixtures:
    @pytest.fixture(scope="class")
    def stft_config(self):
        return StftConfig()

    @staticmethod
    def random_waveform(seed: int, seconds: float = 1.0, sample_rate: int = 16000) -> Waveform:
        rng = np.random.default_rng(seed)
        return Waveform(
            samples=0.3 * rng.uniform(-1, 1, size=int(seconds * sample_rate)),
            sample_rate=sample_rate,
        )
