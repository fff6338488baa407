import pytest

from rlmask.common.exceptions import DatasetError
from rlmask.features import Waveform, write_wav
from rlmask.recognizers import (
    MockRecognizer,
    RecognitionRequest,
    batch_recognize,
    read_recognition_manifest,
    write_recognition_manifest,
)


class TestBatchRecognize:
    @pytest.fixture
    def requests(self, tmp_path, speech, babble):
        clean = write_wav(tmp_path / "clean.wav", speech)
        requests = []
        for index, gain in enumerate((0.1, 0.5)):
            noisy = Waveform(samples=speech.samples + gain * babble.samples[: len(speech)])
            path = write_wav(tmp_path / "u{}.wav".format(index), noisy)
            request_id = "u{}".format(index)
            requests.append(
                RecognitionRequest(utterance_id=request_id, wav_path=path, reference=str(clean))
            )
        corrupt = tmp_path / "corrupt.wav"
        corrupt.write_bytes(b"RIFF....WAVE")
        requests.append(
            RecognitionRequest(utterance_id="bad", wav_path=corrupt, reference=str(clean))
        )
        return requests

    @pytest.mark.parametrize("num_threads", [1, 3])
    def test_failures_do_not_stop_the_batch(self, requests, small_extractor, num_threads):
        recognizer = MockRecognizer(2.0, small_extractor)

        result = batch_recognize(recognizer, requests, num_threads=num_threads)

        assert list(result.rates) == ["u0", "u1"]
        assert list(result.failures) == ["bad"]
        assert result.values()["u0"] <= result.values()["u1"]

    def test_manifest_round_trip(self, tmp_path, requests):
        path = write_recognition_manifest(tmp_path / "manifest.csv", requests)

        assert read_recognition_manifest(path) == requests

    def test_manifest_relative_paths(self, tmp_path):
        path = tmp_path / "manifest.csv"
        path.write_text("id,wav_path,reference\nu1,audio/u1.wav,hello\n")

        (request,) = read_recognition_manifest(path)

        assert request.wav_path == tmp_path / "audio" / "u1.wav"

    def test_manifest_missing_columns(self, tmp_path):
        path = tmp_path / "manifest.csv"
        path.write_text("id,wav\nu1,a.wav\n")

        with pytest.raises(DatasetError):
            read_recognition_manifest(path)

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(DatasetError):
            read_recognition_manifest(tmp_path / "absent.csv")
