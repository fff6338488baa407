"""WAV input/output and feature matrix dumps."""

from pathlib import Path

import numpy as np
import soundfile as sf

from rlmask.common import Defaults, MatrixFormat
from rlmask.common.exceptions import InvalidAudioFile
from rlmask.common.types import PathType
from rlmask.features.types import Waveform

PCM_SUBTYPE = "PCM_16"
PCM_SCALE = 32768.0


def read_wav(path: PathType, sample_rate: int = Defaults.SAMPLE_RATE) -> Waveform:
    """Read a mono 16-bit PCM WAV file at the expected sample rate.

    Raises:
        InvalidAudioFile: If the file is missing, unreadable, or has another format.
    """
    path = Path(path)
    if not path.is_file():
        raise InvalidAudioFile(path, "file does not exist")

    try:
        info = sf.info(str(path))
        if info.channels != 1:
            raise InvalidAudioFile(
                path, "expected mono audio, got {} channels".format(info.channels)
            )
        if info.samplerate != sample_rate:
            raise InvalidAudioFile(
                path, "expected {} Hz, got {} Hz".format(sample_rate, info.samplerate)
            )
        if info.subtype != PCM_SUBTYPE:
            raise InvalidAudioFile(path, "expected {}, got {}".format(PCM_SUBTYPE, info.subtype))
        samples, _ = sf.read(str(path), dtype="int16", always_2d=False)
    except (RuntimeError, sf.SoundFileError) as e:
        raise InvalidAudioFile(path, str(e)) from e

    return Waveform(samples=samples.astype(np.float64) / PCM_SCALE, sample_rate=sample_rate)


def quantize(samples: np.ndarray) -> np.ndarray:
    """Round amplitudes to the 16-bit grid, saturating at full scale."""
    return np.clip(np.round(np.asarray(samples) * PCM_SCALE), -PCM_SCALE, PCM_SCALE - 1).astype(
        np.int16
    )


def write_wav(path: PathType, waveform: Waveform) -> Path:
    """Write a waveform as mono 16-bit PCM; samples outside [-1, 1) saturate."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    sf.write(str(path), quantize(waveform.samples), waveform.sample_rate, subtype=PCM_SUBTYPE)
    return path


def export_matrix(path: PathType, matrix: np.ndarray, fmt: str = MatrixFormat.CSV) -> Path:
    """Dump a feature matrix for inspection or external plotting.

    ``csv`` writes comma-separated rows, ``dat`` whitespace-separated rows (gnuplot
    ``matrix`` input), ``bin`` flat row-major little-endian float64.
    """
    if fmt not in MatrixFormat.ALL:
        raise ValueError("unknown matrix format `{}`".format(fmt))

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if fmt == MatrixFormat.BINARY:
        path.write_bytes(matrix.astype("<f8").tobytes(order="C"))
    else:
        delimiter = "," if fmt == MatrixFormat.CSV else " "
        np.savetxt(path, matrix, delimiter=delimiter, fmt="%.10g")
    return path
