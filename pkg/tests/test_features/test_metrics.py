import numpy as np
import pytest

from rlmask.common.exceptions import InvalidSignal
from rlmask.features import MelPowerSpectrogram, Waveform, log_spectral_distance, segmental_snr

from . import FeatureFixtures


class TestSegmentalSnr(FeatureFixtures):
    def test_identical_hits_ceiling(self):
        waveform = self.random_waveform(1, seconds=0.5)

        assert segmental_snr(waveform, waveform) == pytest.approx(35.0)

    def test_silence_hits_floor(self):
        waveform = self.random_waveform(1, seconds=0.5)
        silence = Waveform(samples=np.zeros(len(waveform)))

        assert segmental_snr(waveform, silence) == pytest.approx(0.0, abs=1e-6)

    def test_inverted(self):
        waveform = self.random_waveform(1, seconds=0.5)
        inverted = Waveform(samples=-waveform.samples)

        assert segmental_snr(waveform, inverted) == pytest.approx(-6.0206, abs=1e-3)

    def test_known_snr(self):
        waveform = self.random_waveform(2, seconds=0.5)
        noisy = Waveform(samples=waveform.samples * 1.1)

        # error is a tenth of the signal in every frame
        assert segmental_snr(waveform, noisy) == pytest.approx(20.0, abs=1e-6)

    def test_too_short(self):
        waveform = Waveform(samples=np.ones(100))

        with pytest.raises(InvalidSignal):
            segmental_snr(waveform, waveform)


class TestLogSpectralDistance:
    def test_identical_is_zero(self):
        mps = MelPowerSpectrogram(values=np.full((4, 3), 2.0))

        assert log_spectral_distance(mps, mps) == 0.0

    def test_uniform_gain(self):
        reference = MelPowerSpectrogram(values=np.full((4, 3), 1.0))
        test = MelPowerSpectrogram(values=np.full((4, 3), 10.0))

        assert log_spectral_distance(reference, test) == pytest.approx(10.0)

    def test_silent_reference(self):
        silent = MelPowerSpectrogram(values=np.zeros((4, 3)))

        with pytest.raises(InvalidSignal):
            log_spectral_distance(silent, silent)

    def test_symmetric_under_flooring(self):
        reference = MelPowerSpectrogram(values=np.array([[1.0, 1e-12], [1.0, 1.0]]))
        test = MelPowerSpectrogram(values=np.array([[1.0, 0.0], [1.0, 1.0]]))

        assert log_spectral_distance(reference, test) == 0.0
