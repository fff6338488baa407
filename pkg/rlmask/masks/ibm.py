"""Ideal binary masks and binary vector arithmetic."""

import numpy as np

from rlmask.common import Defaults
from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.common.types import BitArray, FloatArray
from rlmask.common.utils import safe_log


def _check_same_shape(what: str, a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(what, a.shape, b.shape)


def as_bits(values: np.ndarray) -> BitArray:
    """Validate and convert to a uint8 array of zeros and ones."""
    values = np.asarray(values)
    if not np.all((values == 0) | (values == 1)):
        raise InvalidSignal("mask vectors must be binary")
    return values.astype(np.uint8)


def compute_ibm(clean_chunk: np.ndarray, noise_chunk: np.ndarray) -> BitArray:
    """Ideal binary mask: one where the log clean power is not below the log noise power.

    Both inputs are floored at the log floor first, so a bit is 1 exactly when
    ``max(clean, floor) >= max(noise, floor)``. Works on single chunks or stacks of chunks.
    """
    clean_chunk = np.asarray(clean_chunk, dtype=np.float64)
    noise_chunk = np.asarray(noise_chunk, dtype=np.float64)
    _check_same_shape("ideal binary mask inputs", clean_chunk, noise_chunk)
    if np.any(clean_chunk < 0) or np.any(noise_chunk < 0):
        raise InvalidSignal("power values must be nonnegative")
    return (safe_log(clean_chunk) - safe_log(noise_chunk) >= 0).astype(np.uint8)


def apply_mask(noisy_chunk: np.ndarray, mask: np.ndarray) -> FloatArray:
    """Element-wise product of features and mask; masked-out entries are exactly zero."""
    noisy_chunk = np.asarray(noisy_chunk, dtype=np.float64)
    mask = as_bits(mask)
    _check_same_shape("mask application", noisy_chunk, mask)
    return np.where(mask == 1, noisy_chunk, 0.0)


def hamming_distance(a: np.ndarray, b: np.ndarray) -> int:
    """Number of positions at which two binary vectors differ."""
    a, b = as_bits(a), as_bits(b)
    _check_same_shape("hamming distance", a, b)
    return int(np.count_nonzero(a != b))


def pairwise_hamming(samples: BitArray, centroids: BitArray) -> np.ndarray:
    """Hamming distances between every sample row and every centroid row.

    Uses ``|x xor g| = x.(1-g) + (1-x).g`` as two integer matrix products.
    """
    x = samples.astype(np.int64)
    g = centroids.astype(np.int64)
    return x @ (1 - g).T + (1 - x) @ g.T


def majority_vote(members: BitArray) -> BitArray:
    """Per-bit majority of a set of binary vectors, ties resolved to 1.

    The result minimizes the summed Hamming distance to the members.
    """
    members = as_bits(members)
    if members.ndim != 2 or members.shape[0] == 0:
        raise InvalidSignal("majority vote needs a non-empty stack of vectors")
    return (2 * members.sum(axis=0, dtype=np.int64) >= members.shape[0]).astype(np.uint8)


def shared_chunk_ibm(
    clean_chunks: np.ndarray, noise_chunks: np.ndarray, p: int, n_mels: int = Defaults.N_MELS
) -> BitArray:
    """One ``n_mels`` mask per chunk from the chunk's summed clean and noise powers."""
    clean = np.asarray(clean_chunks, dtype=np.float64).reshape(-1, p, n_mels).sum(axis=1)
    noise = np.asarray(noise_chunks, dtype=np.float64).reshape(-1, p, n_mels).sum(axis=1)
    return compute_ibm(clean, noise)


def expand_shared_masks(masks: np.ndarray, p: int) -> BitArray:
    """Replicate ``n_mels`` masks across the ``p`` frames of a chunk."""
    masks = as_bits(np.atleast_2d(masks))
    return np.tile(masks, (1, p))


def chunk_ibms(
    clean_chunks: np.ndarray,
    noise_chunks: np.ndarray,
    p: int,
    n_mels: int = Defaults.N_MELS,
    shared_mask: bool = False,
) -> BitArray:
    """Ideal masks of a stack of chunks, per frame or shared across each chunk."""
    if shared_mask:
        return shared_chunk_ibm(clean_chunks, noise_chunks, p, n_mels)
    return compute_ibm(clean_chunks, noise_chunks)
