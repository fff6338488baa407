"""Various helpers and utility functions used throughout the project."""

import hashlib
from typing import Optional

import numpy as np

from rlmask.common.defaults import Defaults
from rlmask.common.types import FloatArray


def safe_log(values: np.ndarray, floor: float = Defaults.LOG_FLOOR) -> FloatArray:
    """Natural log of power values clamped from below at ``floor``."""
    return np.log(np.maximum(np.asarray(values, dtype=np.float64), floor))


def generate_hex_hash(data: bytes, length: Optional[int] = None) -> str:
    """Generate a SHA256 hex digest from the given data."""

    hex_hash = hashlib.sha256(data).hexdigest()
    if length is not None:
        hex_hash = hex_hash[:length]
    return hex_hash


def make_rng(seed: int, *streams: int) -> np.random.Generator:
    """Seeded generator; extra integers select an independent sub-stream."""
    return np.random.default_rng(np.random.SeedSequence([seed, *streams]))
