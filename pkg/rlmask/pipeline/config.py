"""Experiment configuration: TOML in, resolved JSON out."""

from __future__ import annotations

import os
import shlex
import sys
from pathlib import Path
from typing import Any, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveFloat,
    PositiveInt,
    ValidationError,
    model_validator,
)

from rlmask.common import Defaults, MatrixFormat, RecognizerKind, logger
from rlmask.common.exceptions import ConfigValidationError
from rlmask.common.types import PathType
from rlmask.features import FeatureExtractor, StftConfig
from rlmask.policy import TrainConfig
from rlmask.recognizers import RecognizerEndpoint
from rlmask.rl import RLConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

RESOLVED_CONFIG_NAME = "config.resolved.json"


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class DataSettings(_Section):
    clean_dir: Optional[Path] = None
    noise_file: Optional[Path] = None
    snr_train_db: float = Defaults.SNR_TRAIN_DB
    snr_test_db: list[float] = Field(default_factory=lambda: list(Defaults.SNR_TEST_DB))
    test_fraction: float = Field(default=Defaults.TEST_FRACTION, gt=0.0, lt=1.0)


class PretrainSettings(_Section):
    hidden_layers: list[PositiveInt] = Field(
        default_factory=lambda: list(Defaults.PRETRAIN_HIDDEN_LAYERS)
    )
    learning_rate: float = Field(default=Defaults.LEARNING_RATE, ge=0.0)
    epochs: PositiveInt = Defaults.PRETRAIN_EPOCHS
    batch_size: PositiveInt = Defaults.BATCH_SIZE


class HeadSettings(_Section):
    hidden_layers: int = Field(default=Defaults.HEAD_HIDDEN_LAYERS, ge=0)
    hidden_units: PositiveInt = Defaults.HEAD_HIDDEN_UNITS
    init_scale: PositiveFloat = Defaults.NEW_LAYER_INIT_SCALE


class RLSettings(_Section):
    epochs: PositiveInt = Defaults.RL_EPOCHS
    alpha: PositiveFloat = Defaults.REWARD_ALPHA
    learning_rate: float = Field(default=Defaults.LEARNING_RATE, ge=0.0)
    batch_size: PositiveInt = Defaults.BATCH_SIZE
    pass_epochs: PositiveInt = Defaults.RL_PASS_EPOCHS
    max_failed_fraction: float = Field(default=Defaults.MAX_FAILED_FRACTION, ge=0.0, le=1.0)


class RecognizerSettings(_Section):
    kind: str = Defaults.RECOGNIZER_KIND
    command: Optional[str] = None
    timeout: PositiveFloat = Defaults.RECOGNIZER_TIMEOUT
    pool_size: PositiveInt = Defaults.RECOGNIZER_POOL_SIZE
    calibration_percentile: float = Field(
        default=Defaults.MOCK_CALIBRATION_PERCENTILE, gt=0.0, le=100.0
    )

    @model_validator(mode="after")
    def _check(self) -> RecognizerSettings:
        if self.kind not in RecognizerKind.ALL:
            raise ValueError("unknown recognizer kind `{}`".format(self.kind))
        return self


class ExportSettings(_Section):
    spectrogram_utterances: int = Field(default=Defaults.SPECTROGRAM_EXPORT_UTTERANCES, ge=0)
    matrix_format: str = MatrixFormat.GNUPLOT

    @model_validator(mode="after")
    def _check(self) -> ExportSettings:
        if self.matrix_format not in MatrixFormat.ALL:
            raise ValueError("unknown matrix format `{}`".format(self.matrix_format))
        return self


class ExperimentConfig(BaseModel):
    """Every setting of an experiment, defaulting to the reference setup.

    Attributes:
        seed: Master seed; every random stream derives from it.
        work_dir: Where all outputs go.
        sample_rate: Audio rate of every file.
        stft: Analysis settings.
        n_mels: Mel bands.
        p: Frames per chunk of the primary variant.
        F: Chunks per context; defaults to 11 for ``p = 1`` and 5 for ``p = 2``.
        input_dim: Declared network input size, checked against ``F * p * n_mels``.
        variants: Extra chunk sizes trained side by side with ``p``.
        A: Codebook size.
        kmeans_max_iter: Iteration cap of the clustering.
        shared_mask_mode: One mel mask per chunk instead of one per frame.
        jobs: Worker threads for per-utterance stages.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = 0
    work_dir: Optional[Path] = None
    sample_rate: PositiveInt = Defaults.SAMPLE_RATE
    stft: StftConfig = Field(default_factory=StftConfig)
    n_mels: PositiveInt = Defaults.N_MELS
    p: PositiveInt = Defaults.CHUNK_FRAMES
    F: Optional[PositiveInt] = None
    input_dim: Optional[PositiveInt] = None
    variants: list[PositiveInt] = Field(default_factory=list)
    A: int = Field(default=Defaults.NUM_CLUSTERS, ge=2)
    kmeans_max_iter: PositiveInt = Defaults.KMEANS_MAX_ITER
    shared_mask_mode: bool = Defaults.SHARED_MASK_MODE
    jobs: PositiveInt = Defaults.DEFAULT_NUM_THREADS

    data: DataSettings = Field(default_factory=DataSettings)
    pretrain: PretrainSettings = Field(default_factory=PretrainSettings)
    head: HeadSettings = Field(default_factory=HeadSettings)
    rl: RLSettings = Field(default_factory=RLSettings)
    recognizer: RecognizerSettings = Field(default_factory=RecognizerSettings)
    export: ExportSettings = Field(default_factory=ExportSettings)

    @model_validator(mode="after")
    def _check_dimensions(self) -> ExperimentConfig:
        if self.input_dim is not None and self.input_dim != self.input_dim_for(self.p):
            raise ValueError(
                "input_dim {} disagrees with F * p * n_mels = {} * {} * {} = {}".format(
                    self.input_dim,
                    self.context_for(self.p),
                    self.p,
                    self.n_mels,
                    self.input_dim_for(self.p),
                )
            )
        return self

    def context_for(self, p: int) -> int:
        if p == self.p and self.F is not None:
            return self.F
        return Defaults.CONTEXT_CHUNKS.get(p, Defaults.FALLBACK_CONTEXT_FRAMES)

    def input_dim_for(self, p: int) -> int:
        return self.context_for(p) * p * self.n_mels

    @property
    def chunk_sizes(self) -> list[int]:
        """Chunk size of every variant, primary first."""
        sizes = [self.p]
        for p in self.variants:
            if p not in sizes:
                sizes.append(p)
        return sizes

    def extractor(self, p: Optional[int] = None) -> FeatureExtractor:
        p = self.p if p is None else p
        return FeatureExtractor.create(
            stft_config=self.stft,
            n_mels=self.n_mels,
            p=p,
            F=self.context_for(p),
            sample_rate=self.sample_rate,
        )

    def pretrain_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.pretrain.learning_rate,
            epochs=self.pretrain.epochs,
            batch_size=self.pretrain.batch_size,
            seed=self.seed,
        )

    def rl_config(self) -> RLConfig:
        return RLConfig(
            epochs=self.rl.epochs,
            alpha=self.rl.alpha,
            learning_rate=self.rl.learning_rate,
            batch_size=self.rl.batch_size,
            pass_epochs=self.rl.pass_epochs,
            seed=self.seed,
            max_failed_fraction=self.rl.max_failed_fraction,
            num_threads=self.jobs,
        )

    def recognizer_endpoint(self, calibration_lsd: Optional[float] = None) -> RecognizerEndpoint:
        command = shlex.split(self.recognizer.command) if self.recognizer.command else None
        return RecognizerEndpoint(
            kind=self.recognizer.kind,
            command=command,
            timeout=self.recognizer.timeout,
            pool_size=self.recognizer.pool_size,
            calibration_lsd=calibration_lsd,
        )

    def with_overrides(self, **overrides: Any) -> ExperimentConfig:
        """Copy with top-level fields replaced; ``None`` values are ignored."""
        data = self.model_dump()
        for key, value in overrides.items():
            if value is not None:
                data[key] = value
        return build_config(data)

    def with_recognizer_command(self, command: Optional[str]) -> ExperimentConfig:
        if not command:
            return self
        data = self.model_dump()
        data["recognizer"].update(kind=RecognizerKind.EXTERNAL, command=command)
        return build_config(data)

    def resolved_json(self) -> str:
        return self.model_dump_json(indent=2)

    def write_resolved(self, directory: PathType) -> Path:
        path = Path(directory) / RESOLVED_CONFIG_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.resolved_json() + "\n", encoding="utf-8")
        return path


def build_config(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigValidationError(str(e)) from e


def load_config(path: Optional[PathType] = None) -> ExperimentConfig:
    """Read a TOML config (all keys optional); without a path every default applies.

    The recognizer command falls back to the ``RLMASK_RECOGNIZER_CMD`` environment variable.
    """
    data: dict = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigValidationError("config file `{}` does not exist".format(path))
        try:
            with open(path, "rb") as f:
                data = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ConfigValidationError("cannot parse `{}`: {}".format(path, e)) from e
        base = path.parent
        for section, key in (("data", "clean_dir"), ("data", "noise_file")):
            value = data.get(section, {}).get(key)
            if value is not None and not Path(value).is_absolute():
                data[section][key] = str(base / value)

    config = build_config(data)
    env_command = os.environ.get(Defaults.RECOGNIZER_CMD_ENV_VAR)
    if env_command and config.recognizer.command is None:
        logger.info("Using recognizer command from %s", Defaults.RECOGNIZER_CMD_ENV_VAR)
        config = config.with_recognizer_command(env_command)
    return config
