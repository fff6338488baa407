"""Experiment pipeline: data preparation, training stages, enhancement and evaluation."""

from .config import ExperimentConfig, load_config
from .experiment import Experiment
from .stages import Stage, StageRunner
from .workspace import Workspace

__all__ = [
    "Experiment",
    "ExperimentConfig",
    "Stage",
    "StageRunner",
    "Workspace",
    "load_config",
]
