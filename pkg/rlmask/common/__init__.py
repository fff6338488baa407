"""Common utilities, types, enums, exceptions, loggers etc."""

from .defaults import Defaults
from .enums import ExitCode
from .enums import HiddenActivation
from .enums import JobStatus
from .enums import MatrixFormat
from .enums import OutputActivation
from .enums import RecognizerKind
from .enums import SplitTag
from .enums import StageStatus
from .enums import SystemName
from .logging import logger, configure_logging

__all__ = [
    "Defaults",
    "logger",
    "configure_logging",
    "ExitCode",
    "HiddenActivation",
    "JobStatus",
    "MatrixFormat",
    "OutputActivation",
    "RecognizerKind",
    "SplitTag",
    "StageStatus",
    "SystemName",
]
