"""Noisy dataset preparation: SNR mixing, train/test split, and the dataset manifest."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from rlmask.common import Defaults, RecognizerKind, SplitTag, logger
from rlmask.common.exceptions import DatasetError, InsufficientAudio, InvalidSignal
from rlmask.common.types import PathType
from rlmask.common.utils import make_rng
from rlmask.common.workers import map_ordered
from rlmask.features import Waveform, read_wav, write_wav
from rlmask.pipeline.config import ExperimentConfig
from rlmask.recognizers import calibrate_mock

MANIFEST_COLUMNS = (
    "id",
    "utterance",
    "split",
    "snr_db",
    "clean_path",
    "noise_path",
    "noisy_path",
    "noise_start",
    "noise_end",
    "scale",
    "transcript",
)


class MixResult(BaseModel):
    """A mixture and its scaled components (``mixture == clean + noise``)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    clean: Waveform
    noise: Waveform
    mixture: Waveform
    noise_gain: float
    scale: float
    noise_start: int
    noise_end: int


def _power(samples: np.ndarray) -> float:
    return float(np.mean(np.asarray(samples, dtype=np.float64) ** 2))


def fit_noise(
    noise: np.ndarray, length: int, rng: np.random.Generator
) -> tuple[np.ndarray, int, int]:
    """Noise excerpt of ``length`` samples at a seeded offset, tiled when the noise is shorter.

    Returns the excerpt and the ``[start, end)`` range of ``noise`` it covers.
    """
    noise = np.asarray(noise, dtype=np.float64)
    if noise.shape[0] >= length:
        start = int(rng.integers(0, noise.shape[0] - length + 1))
        return noise[start : start + length], start, start + length
    offset = int(rng.integers(0, noise.shape[0]))
    return np.resize(np.roll(noise, -offset), length), 0, noise.shape[0]


def mix_components(
    clean: Waveform,
    noise: Waveform,
    snr_db: float,
    seed: int = 0,
    clip_peak: float = Defaults.CLIP_PEAK,
) -> MixResult:
    """Scale the noise to ``snr_db`` against the clean utterance and add them.

    When the mixture would exceed ``clip_peak``, clean, noise and mixture are scaled down
    together, which keeps the SNR.

    Raises:
        InvalidSignal: If the clean or the noise signal is silent.
    """
    if clean.sample_rate != noise.sample_rate:
        raise InvalidSignal(
            "sample rates differ: {} vs {} Hz".format(clean.sample_rate, noise.sample_rate)
        )
    clean_power = _power(clean.samples)
    if clean_power <= 0:
        raise InvalidSignal("clean signal is silent")

    excerpt, start, end = fit_noise(noise.samples, len(clean), make_rng(seed))
    noise_power = _power(excerpt)
    if noise_power <= 0:
        raise InvalidSignal("noise excerpt is silent")

    gain = float(np.sqrt(clean_power / (noise_power * 10.0 ** (snr_db / 10.0))))
    clean_samples = clean.samples
    noise_samples = gain * excerpt
    mixture = clean_samples + noise_samples

    scale = 1.0
    peak = float(np.max(np.abs(mixture)))
    if peak > clip_peak:
        scale = clip_peak / peak
        clean_samples, noise_samples, mixture = (
            scale * clean_samples,
            scale * noise_samples,
            scale * mixture,
        )

    rate = clean.sample_rate
    return MixResult(
        clean=Waveform(samples=clean_samples, sample_rate=rate),
        noise=Waveform(samples=noise_samples, sample_rate=rate),
        mixture=Waveform(samples=mixture, sample_rate=rate),
        noise_gain=gain,
        scale=scale,
        noise_start=start,
        noise_end=end,
    )


def mix_at_snr(clean: Waveform, noise: Waveform, snr_db: float, seed: int = 0) -> Waveform:
    """Mixture of ``clean`` and ``noise`` at ``snr_db`` over the utterance."""
    return mix_components(clean, noise, snr_db, seed).mixture


def measured_snr(clean: np.ndarray, noise: np.ndarray) -> float:
    return 10.0 * np.log10(_power(clean) / _power(noise))


class ManifestRow(BaseModel):
    """One mixture of the dataset.

    ``noise_start``/``noise_end`` locate the noise excerpt in the source noise file.
    """

    model_config = ConfigDict(frozen=True)

    id: str
    utterance: str
    split: str
    snr_db: float
    clean_path: Path
    noise_path: Path
    noisy_path: Path
    noise_start: int
    noise_end: int
    scale: float = 1.0
    transcript: str = ""

    @model_validator(mode="after")
    def _check(self) -> ManifestRow:
        if self.split not in SplitTag.ALL:
            raise ValueError("unknown split `{}`".format(self.split))
        if not 0 <= self.noise_start < self.noise_end:
            raise ValueError("empty noise range [{}, {})".format(self.noise_start, self.noise_end))
        return self

    def reference(self, kind: str) -> str:
        """What the recognizer scores against: the clean file for the mock, else the transcript."""
        return str(self.clean_path) if kind == RecognizerKind.MOCK else self.transcript


class DatasetManifest(BaseModel):
    """All mixtures of a prepared dataset; paths are absolute once loaded."""

    rows: list[ManifestRow] = Field(default_factory=list)

    @model_validator(mode="after")
    def _unique(self) -> DatasetManifest:
        ids = [row.id for row in self.rows]
        if len(ids) != len(set(ids)):
            raise ValueError("manifest ids must be unique")
        return self

    def __len__(self) -> int:
        return len(self.rows)

    def split(self, tag: str) -> list[ManifestRow]:
        return [row for row in self.rows if row.split == tag]

    @property
    def train_rows(self) -> list[ManifestRow]:
        return self.split(SplitTag.TRAIN)

    @property
    def test_rows(self) -> list[ManifestRow]:
        return self.split(SplitTag.TEST)

    def noise_ranges(self, tag: str) -> tuple[int, int]:
        """Smallest ``[start, end)`` range of the noise source used by a split."""
        rows = self.split(tag)
        if not rows:
            raise DatasetError("no {} rows in the manifest".format(tag))
        return min(r.noise_start for r in rows), max(r.noise_end for r in rows)

    def check_disjoint_noise(self) -> None:
        train_start, train_end = self.noise_ranges(SplitTag.TRAIN)
        test_start, test_end = self.noise_ranges(SplitTag.TEST)
        if train_start < test_end and test_start < train_end:
            raise DatasetError(
                "train noise [{}, {}) overlaps test noise [{}, {})".format(
                    train_start, train_end, test_start, test_end
                )
            )

    def save(self, path: PathType) -> Path:
        """Write the manifest as CSV with paths relative to its directory."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        base = path.parent.absolute()

        def rel(p: Path) -> str:
            p = p.absolute()
            return p.relative_to(base).as_posix() if p.is_relative_to(base) else str(p)

        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(MANIFEST_COLUMNS)
            for row in self.rows:
                writer.writerow(
                    [
                        row.id,
                        row.utterance,
                        row.split,
                        "{:g}".format(row.snr_db),
                        rel(row.clean_path),
                        rel(row.noise_path),
                        rel(row.noisy_path),
                        row.noise_start,
                        row.noise_end,
                        repr(row.scale),
                        row.transcript,
                    ]
                )
        return path

    @classmethod
    def load(cls, path: PathType) -> DatasetManifest:
        path = Path(path)
        if not path.is_file():
            raise DatasetError("manifest `{}` does not exist; run `prepare` first".format(path))
        base = path.parent.absolute()
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            missing = set(MANIFEST_COLUMNS) - set(reader.fieldnames or [])
            if missing:
                raise DatasetError("manifest `{}` lacks columns {}".format(path, sorted(missing)))
            try:
                rows = [
                    ManifestRow(
                        **{
                            **row,
                            "clean_path": base / row["clean_path"],
                            "noise_path": base / row["noise_path"],
                            "noisy_path": base / row["noisy_path"],
                        }
                    )
                    for row in reader
                ]
                return cls(rows=rows)
            except ValueError as e:
                raise DatasetError("bad manifest `{}`: {}".format(path, e)) from e


class Calibration(BaseModel):
    """Mock recognizer calibration fixed when the dataset is prepared."""

    lsd: float
    percentile: float
    pairs: int

    def save(self, path: PathType) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: PathType) -> Calibration:
        path = Path(path)
        if not path.is_file():
            raise DatasetError("calibration `{}` does not exist; run `prepare` first".format(path))
        return cls.model_validate(json.loads(path.read_text(encoding="utf-8")))


class _MixJob(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    utterance: str
    clean_file: Path
    transcript: str
    split: str
    snr_db: float
    noise_offset: int
    seed: int


def _snr_tag(snr_db: float) -> str:
    return "{:g}".format(snr_db).replace("-", "m").replace(".", "p")


def _read_transcript(clean_file: Path) -> str:
    sidecar = clean_file.with_suffix(".txt")
    return sidecar.read_text(encoding="utf-8").strip() if sidecar.is_file() else ""


def split_utterances(
    stems: Sequence[str], test_fraction: float, seed: int
) -> tuple[list[str], list[str]]:
    """Seeded train/test split; both parts are non-empty and keep the input order."""
    if len(stems) < 2:
        raise InsufficientAudio("clean utterances", 2, len(stems))
    n_test = min(len(stems) - 1, max(1, int(round(len(stems) * test_fraction))))
    test = set(make_rng(seed, 1).permutation(len(stems))[:n_test].tolist())
    train_stems = [s for i, s in enumerate(stems) if i not in test]
    test_stems = [s for i, s in enumerate(stems) if i in test]
    return train_stems, test_stems


def prepare(
    config: ExperimentConfig,
    raw_clean_dir: PathType,
    noise_file: PathType,
    data_dir: PathType,
    manifest_path: Optional[PathType] = None,
    calibration_path: Optional[PathType] = None,
) -> DatasetManifest:
    """Mix every clean utterance with its split's half of the noise source and persist the result.

    Training utterances get one mixture at ``snr_train_db``; test utterances one per
    ``snr_test_db``. The first half of the noise file feeds training mixtures, the second
    half test mixtures. The mock recognizer calibration is computed from the training pairs.

    Raises:
        InsufficientAudio: If there are fewer than two clean files or the noise is too short.
    """
    raw_clean_dir, noise_file, data_dir = Path(raw_clean_dir), Path(noise_file), Path(data_dir)
    if not raw_clean_dir.is_dir():
        raise DatasetError("clean directory `{}` does not exist".format(raw_clean_dir))
    clean_files = sorted(raw_clean_dir.glob("*.wav"))
    stems = [f.stem for f in clean_files]
    train_stems, test_stems = split_utterances(stems, config.data.test_fraction, config.seed)

    noise = read_wav(noise_file, config.sample_rate)
    half = len(noise) // 2
    if half < config.stft.frame_length:
        raise InsufficientAudio("noise samples", 2 * config.stft.frame_length, len(noise))
    halves = {
        SplitTag.TRAIN: (0, noise.samples[:half]),
        SplitTag.TEST: (half, noise.samples[half : 2 * half]),
    }

    files = dict(zip(stems, clean_files))
    jobs: list[_MixJob] = []
    for split, split_stems, snrs in (
        (SplitTag.TRAIN, train_stems, [config.data.snr_train_db]),
        (SplitTag.TEST, test_stems, config.data.snr_test_db),
    ):
        for stem in split_stems:
            for snr_db in snrs:
                jobs.append(
                    _MixJob(
                        utterance=stem,
                        clean_file=files[stem],
                        transcript=_read_transcript(files[stem]),
                        split=split,
                        snr_db=snr_db,
                        noise_offset=halves[split][0],
                        seed=config.seed * 100003 + len(jobs),
                    )
                )

    def run(job: _MixJob) -> ManifestRow:
        clean = read_wav(job.clean_file, config.sample_rate)
        noise_half = Waveform(samples=halves[job.split][1], sample_rate=config.sample_rate)
        mix = mix_components(clean, noise_half, job.snr_db, job.seed)
        row_id = "{}_snr{}".format(job.utterance, _snr_tag(job.snr_db))
        out_dir = data_dir / job.split
        return ManifestRow(
            id=row_id,
            utterance=job.utterance,
            split=job.split,
            snr_db=job.snr_db,
            clean_path=write_wav(out_dir / "{}_clean.wav".format(row_id), mix.clean),
            noise_path=write_wav(out_dir / "{}_noise.wav".format(row_id), mix.noise),
            noisy_path=write_wav(out_dir / "{}_noisy.wav".format(row_id), mix.mixture),
            noise_start=job.noise_offset + mix.noise_start,
            noise_end=job.noise_offset + mix.noise_end,
            scale=mix.scale,
            transcript=job.transcript,
        )

    results = map_ordered(run, jobs, keys=[j.utterance for j in jobs], num_threads=config.jobs)
    for job in results:
        if not job.ok:
            raise job.error
    manifest = DatasetManifest(rows=[job.result for job in results])
    manifest.check_disjoint_noise()
    manifest.save(manifest_path or data_dir / "manifest.csv")
    logger.info(
        "Prepared %s train and %s test mixtures in %s",
        len(manifest.train_rows),
        len(manifest.test_rows),
        data_dir,
    )

    calibration = calibrate_dataset(manifest, config)
    calibration.save(calibration_path or data_dir / "calibration.json")
    return manifest


def calibrate_dataset(manifest: DatasetManifest, config: ExperimentConfig) -> Calibration:
    extractor = config.extractor()
    pairs = (
        (read_wav(row.noisy_path, config.sample_rate), read_wav(row.clean_path, config.sample_rate))
        for row in manifest.train_rows
    )
    percentile = config.recognizer.calibration_percentile
    lsd = calibrate_mock(pairs, extractor, percentile)
    return Calibration(lsd=lsd, percentile=percentile, pairs=len(manifest.train_rows))
