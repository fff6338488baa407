"""Chunking of mel frames and context stacking of chunks."""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.common.types import FloatArray
from rlmask.features.types import ChunkSequence, MelPowerSpectrogram


def make_chunks(mps: MelPowerSpectrogram, p: int) -> ChunkSequence:
    """Group ``p`` consecutive frames into one chunk vector.

    When the frame count is not a multiple of ``p`` the last frame is repeated to fill the
    final chunk.
    """
    if p < 1:
        raise InvalidSignal("frames per chunk must be at least 1, got {}".format(p))
    if mps.frames == 0:
        raise InvalidSignal("cannot chunk an empty mel power spectrogram")

    n_chunks = -(-mps.frames // p)
    padding = n_chunks * p - mps.frames
    frames = mps.values
    if padding:
        frames = np.concatenate([frames, np.repeat(frames[-1:], padding, axis=0)], axis=0)

    return ChunkSequence(
        p=p,
        n_mels=mps.n_mels,
        n_frames=mps.frames,
        chunks=frames.reshape(n_chunks, p * mps.n_mels),
    )


def make_context(cs: ChunkSequence, F: int) -> FloatArray:
    """Cascade ``F`` consecutive chunks ending at each chunk.

    Row ``c`` of the result is ``[chunk[c-F+1], ..., chunk[c]]`` flattened; chunks before the
    start are replaced by chunk 0.

    Returns:
        ``C x (F * p * n_mels)`` matrix.
    """
    if F < 1:
        raise InvalidSignal("context size must be at least 1, got {}".format(F))
    if cs.count == 0:
        raise InvalidSignal("cannot build context over an empty chunk sequence")

    padded = np.concatenate([np.repeat(cs.chunks[:1], F - 1, axis=0), cs.chunks], axis=0)
    # (C, dim, F) -> (C, F, dim)
    windows = sliding_window_view(padded, F, axis=0).transpose(0, 2, 1)
    return np.ascontiguousarray(windows.reshape(cs.count, F * cs.dimension))


def flatten_chunks(cs: ChunkSequence) -> FloatArray:
    """Undo chunking: the padded frame sequence, ``(C * p) x n_mels``."""
    return cs.chunks.reshape(cs.count * cs.p, cs.n_mels)


def chunk_masks_to_frames(
    chunk_masks: np.ndarray, p: int, n_mels: int, n_frames: int
) -> np.ndarray:
    """Per-frame mel masks from per-chunk masks, with chunk padding frames dropped."""
    chunk_masks = np.asarray(chunk_masks)
    if chunk_masks.ndim != 2 or chunk_masks.shape[1] != p * n_mels:
        raise DimensionMismatch("chunk masks", ("C", p * n_mels), chunk_masks.shape)
    frames = chunk_masks.reshape(-1, n_mels)
    if frames.shape[0] < n_frames:
        raise DimensionMismatch("chunk mask frames", n_frames, frames.shape[0])
    return frames[:n_frames]
