import numpy as np
import pytest
import soundfile as sf

from rlmask.common.exceptions import InvalidAudioFile
from rlmask.features import Waveform, export_matrix, read_wav, write_wav

from . import FeatureFixtures


class TestWavIO(FeatureFixtures):
    def test_round_trip_within_quantization(self, tmp_path):
        waveform = self.random_waveform(11, seconds=0.2)

        path = write_wav(tmp_path / "a.wav", waveform)
        restored = read_wav(path)

        assert restored.sample_rate == 16000
        assert np.max(np.abs(restored.samples - waveform.samples)) <= 1.0 / 32768

    def test_write_saturates(self, tmp_path):
        path = write_wav(tmp_path / "loud.wav", Waveform(samples=np.array([2.0, -2.0, 0.0])))

        restored = read_wav(path)

        assert restored.samples[0] == pytest.approx(32767 / 32768)
        assert restored.samples[1] == -1.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidAudioFile):
            read_wav(tmp_path / "absent.wav")

    def test_corrupt_file(self, tmp_path):
        path = tmp_path / "corrupt.wav"
        path.write_bytes(b"RIFF\x00\x00not really audio")

        with pytest.raises(InvalidAudioFile):
            read_wav(path)

    def test_wrong_rate(self, tmp_path):
        path = tmp_path / "8k.wav"
        sf.write(str(path), np.zeros(800, dtype=np.int16), 8000, subtype="PCM_16")

        with pytest.raises(InvalidAudioFile):
            read_wav(path)

    def test_stereo(self, tmp_path):
        path = tmp_path / "stereo.wav"
        sf.write(str(path), np.zeros((800, 2), dtype=np.int16), 16000, subtype="PCM_16")

        with pytest.raises(InvalidAudioFile):
            read_wav(path)

    def test_float_subtype(self, tmp_path):
        path = tmp_path / "float.wav"
        sf.write(str(path), np.zeros(800, dtype=np.float32), 16000, subtype="FLOAT")

        with pytest.raises(InvalidAudioFile):
            read_wav(path)


class TestExportMatrix:
    @pytest.mark.parametrize("fmt", ["csv", "dat"])
    def test_text_formats(self, tmp_path, fmt):
        matrix = np.array([[1.0, 2.5], [3.0, -4.0]])

        path = export_matrix(tmp_path / "m.{}".format(fmt), matrix, fmt)

        delimiter = "," if fmt == "csv" else None
        assert np.allclose(np.loadtxt(path, delimiter=delimiter), matrix)

    def test_binary(self, tmp_path):
        matrix = np.arange(6, dtype=float).reshape(2, 3)

        path = export_matrix(tmp_path / "m.bin", matrix, "bin")

        assert np.array_equal(np.fromfile(path, dtype="<f8").reshape(2, 3), matrix)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            export_matrix(tmp_path / "m.xyz", np.zeros((1, 1)), "xyz")
