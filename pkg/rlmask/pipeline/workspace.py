"""Layout of an experiment's working directory."""

from pathlib import Path
from typing import Optional

from platformdirs import user_cache_dir

from rlmask.common import Defaults
from rlmask.common.types import PathType


class Workspace:
    """Paths of every artifact an experiment reads or writes.

    ::

        config.resolved.json
        rlmask.log
        data/manifest.csv, data/calibration.json, data/{train,test}/*.wav
        models/p<p>/codebook.bin, mask_estimator.bin, action_estimator.bin, nn_index.npz
        logs/p<p>/pretrain_loss.csv, rl_epochs.csv
        enhanced/<system>/<id>.wav
        reports/report.csv, per_utterance.csv, plots/
        scratch/
    """

    def __init__(self, root: Optional[PathType] = None):
        self.root = Path(root) if root is not None else Path(user_cache_dir(Defaults.APP_NAME))

    def __repr__(self):
        return "Workspace(root={})".format(self.root)

    @property
    def log_file(self) -> Path:
        return self.root / "rlmask.log"

    @property
    def data_dir(self) -> Path:
        return self.root / "data"

    @property
    def manifest_path(self) -> Path:
        return self.data_dir / "manifest.csv"

    @property
    def calibration_path(self) -> Path:
        return self.data_dir / "calibration.json"

    def models_dir(self, p: int) -> Path:
        return self.root / "models" / "p{}".format(p)

    def codebook_path(self, p: int) -> Path:
        return self.models_dir(p) / "codebook.bin"

    def mask_estimator_path(self, p: int) -> Path:
        return self.models_dir(p) / "mask_estimator.bin"

    def action_estimator_path(self, p: int) -> Path:
        return self.models_dir(p) / "action_estimator.bin"

    def neighbor_index_path(self, p: int) -> Path:
        return self.models_dir(p) / "nn_index.npz"

    def logs_dir(self, p: int) -> Path:
        return self.root / "logs" / "p{}".format(p)

    def pretrain_log(self, p: int) -> Path:
        return self.logs_dir(p) / "pretrain_loss.csv"

    def rl_log(self, p: int) -> Path:
        return self.logs_dir(p) / "rl_epochs.csv"

    def enhanced_dir(self, system: str) -> Path:
        return self.root / "enhanced" / system

    def enhanced_path(self, system: str, utterance_id: str) -> Path:
        return self.enhanced_dir(system) / "{}.wav".format(utterance_id)

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    @property
    def report_path(self) -> Path:
        return self.reports_dir / "report.csv"

    @property
    def per_utterance_path(self) -> Path:
        return self.reports_dir / "per_utterance.csv"

    @property
    def plots_dir(self) -> Path:
        return self.reports_dir / "plots"

    def scratch_dir(self, p: int) -> Path:
        return self.root / "scratch" / "p{}".format(p)
