import numpy as np
import pytest

from rlmask.common import RecognizerKind
from rlmask.common.exceptions import InvalidSignal, RecognizerFailure
from rlmask.features import Waveform, write_wav
from rlmask.recognizers import (
    MockRecognizer,
    RecognitionRequest,
    RecognizerEndpoint,
    calibrate_mock,
    cer,
    mock_error_rate,
    open_recognizer,
)
from rlmask.recognizers.mock import utterance_lsd


class MockFixtures:
    @pytest.fixture
    def mixtures(self, speech, babble):
        noise = babble.samples[: len(speech)]
        return {
            gain: Waveform(samples=speech.samples + gain * noise) for gain in (0.1, 0.3, 1.0, 3.0)
        }

    @pytest.fixture
    def calibration(self, speech, mixtures, small_extractor):
        return calibrate_mock(
            [(noisy, speech) for noisy in mixtures.values()], small_extractor, percentile=50
        )


class TestMockErrorRate(MockFixtures):
    def test_clean_scores_zero(self, speech, small_extractor):
        assert mock_error_rate(speech, speech, 1.0, small_extractor).value == 0.0

    def test_monotone_in_noise(self, speech, mixtures, calibration, small_extractor):
        rates = [
            mock_error_rate(mixtures[gain], speech, calibration, small_extractor).value
            for gain in sorted(mixtures)
        ]

        assert rates == sorted(rates)
        assert rates[-1] == 1.0
        assert 0.0 < rates[0] < 1.0

    def test_silence_is_clamped(self, speech, small_extractor):
        silence = Waveform(samples=np.zeros(len(speech)))

        assert mock_error_rate(silence, speech, 0.5, small_extractor).value == 1.0

    def test_bad_calibration(self, speech):
        with pytest.raises(InvalidSignal):
            mock_error_rate(speech, speech, 0.0)


class TestCalibration(MockFixtures):
    def test_median(self, speech, mixtures, calibration, small_extractor):
        distances = [utterance_lsd(noisy, speech, small_extractor) for noisy in mixtures.values()]

        assert calibration == pytest.approx(np.median(distances))

    def test_no_pairs(self):
        with pytest.raises(InvalidSignal):
            calibrate_mock([])


class TestMockRecognizer(MockFixtures):
    @pytest.fixture
    def files(self, tmp_path, speech, mixtures):
        clean = write_wav(tmp_path / "clean.wav", speech)
        noisy = write_wav(tmp_path / "noisy.wav", mixtures[0.3])
        return clean, noisy

    def test_transcript_matches_error_rate(self, files, calibration, small_extractor):
        clean, noisy = files
        recognizer = MockRecognizer(calibration, small_extractor, references={"u1": clean})

        rate = recognizer.score(
            RecognitionRequest(utterance_id="u1", wav_path=noisy, reference=str(clean))
        ).value
        transcript = recognizer.recognize("u1", noisy)

        assert 0.0 < rate < 1.0
        assert cer(transcript, recognizer.reference_transcript("u1")).value == pytest.approx(
            rate, abs=1e-3
        )

    def test_reference_transcript_is_stable(self, calibration):
        recognizer = MockRecognizer(calibration, transcript_length=50)

        first = recognizer.reference_transcript("u1")

        assert first == recognizer.reference_transcript("u1")
        assert len(first) == 50
        assert first != recognizer.reference_transcript("u2")

    def test_unknown_utterance(self, files, calibration, small_extractor):
        _, noisy = files

        with MockRecognizer(calibration, small_extractor) as recognizer:
            with pytest.raises(RecognizerFailure):
                recognizer.recognize("u1", noisy)

    def test_unreadable_file(self, tmp_path, files, calibration, small_extractor):
        clean, _ = files
        broken = tmp_path / "broken.wav"
        broken.write_bytes(b"junk")
        recognizer = MockRecognizer(calibration, small_extractor)

        with pytest.raises(RecognizerFailure):
            recognizer.error_rate("u1", broken, clean)


class TestOpenRecognizer:
    def test_mock_needs_calibration(self):
        with pytest.raises(InvalidSignal):
            open_recognizer(RecognizerEndpoint(kind=RecognizerKind.MOCK))

    def test_mock(self):
        endpoint = RecognizerEndpoint(kind=RecognizerKind.MOCK, calibration_lsd=3.0)

        assert isinstance(open_recognizer(endpoint), MockRecognizer)
