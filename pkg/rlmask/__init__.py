"""rlmask root package."""
from importlib import metadata

from .pipeline import Experiment, ExperimentConfig, load_config

try:
    __version__ = metadata.version(__package__)
except metadata.PackageNotFoundError:
    __version__ = ""
