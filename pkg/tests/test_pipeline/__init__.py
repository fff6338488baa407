from pathlib import Path

import pytest

from rlmask.pipeline.config import ExperimentConfig, build_config
from rlmask.pipeline.dataset import prepare
from rlmask.pipeline.synthetic import SynthConfig, generate_corpus

SMALL_CORPUS = SynthConfig(n_utterances=8, min_syllables=2, max_syllables=3, noise_seconds=6.0)


def small_config(
    clean_dir: Path, noise_file: Path, work_dir: Path, **overrides
) -> ExperimentConfig:
    """16 mel bands, 3-chunk contexts, 4 codebook entries and tiny networks."""
    data = {
        "seed": 0,
        "work_dir": str(work_dir),
        "n_mels": 16,
        "F": 3,
        "A": 4,
        "jobs": 2,
        "data": {"clean_dir": str(clean_dir), "noise_file": str(noise_file)},
        "pretrain": {"hidden_layers": [8], "epochs": 2},
        "head": {"hidden_units": 8},
        "rl": {"epochs": 2},
        "recognizer": {"calibration_percentile": 50.0},
    }
    data.update(overrides)
    return build_config(data)


class PipelineFixtures:
    @pytest.fixture(scope="class")
    def corpus(self, tmp_path_factory):
        return generate_corpus(tmp_path_factory.mktemp("corpus"), SMALL_CORPUS)

    @pytest.fixture
    def config(self, corpus, tmp_path):
        clean_dir, noise_file = corpus
        return small_config(clean_dir, noise_file, tmp_path / "work")

    @pytest.fixture(scope="class")
    def prepared(self, corpus, tmp_path_factory):
        """A config and the manifest it prepared, shared by a test class."""
        clean_dir, noise_file = corpus
        work_dir = tmp_path_factory.mktemp("prepared")
        config = small_config(clean_dir, noise_file, work_dir)
        data_dir = work_dir / "data"
        manifest = prepare(config, clean_dir, noise_file, data_dir)
        return config, manifest, data_dir
