import numpy as np
import pytest

from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.features import (
    MelPowerSpectrogram,
    chunk_masks_to_frames,
    flatten_chunks,
    make_chunks,
    make_context,
)


def _mps(frames: int, n_mels: int = 2) -> MelPowerSpectrogram:
    values = np.arange(frames * n_mels, dtype=float).reshape(frames, n_mels)
    return MelPowerSpectrogram(values=values)


class TestMakeChunks:
    def test_exact_multiple(self):
        cs = make_chunks(_mps(6), p=3)

        assert cs.count == 2
        assert cs.dimension == 6
        assert np.array_equal(cs.chunks[0], [0, 1, 2, 3, 4, 5])

    def test_pads_with_last_frame(self):
        cs = make_chunks(_mps(5), p=2)

        assert cs.count == 3
        assert cs.n_frames == 5
        assert np.array_equal(cs.chunks[-1], [8, 9, 8, 9])

    def test_single_frame_chunks(self):
        mps = _mps(4)

        cs = make_chunks(mps, p=1)

        assert np.array_equal(cs.chunks, mps.values)

    def test_flatten_keeps_padding(self):
        flat = flatten_chunks(make_chunks(_mps(5), p=2))

        assert flat.shape == (6, 2)
        assert np.array_equal(flat[:5], _mps(5).values)

    def test_empty(self):
        with pytest.raises(InvalidSignal):
            make_chunks(MelPowerSpectrogram(values=np.zeros((0, 2))), p=1)

    def test_bad_p(self):
        with pytest.raises(InvalidSignal):
            make_chunks(_mps(4), p=0)


class TestMakeContext:
    def test_pads_start_with_first_chunk(self):
        cs = make_chunks(_mps(3, n_mels=1), p=1)

        contexts = make_context(cs, F=3)

        assert contexts.shape == (3, 3)
        assert np.array_equal(contexts[0], [0, 0, 0])
        assert np.array_equal(contexts[1], [0, 0, 1])
        assert np.array_equal(contexts[2], [0, 1, 2])

    def test_last_block_is_current_chunk(self):
        cs = make_chunks(_mps(7, n_mels=4), p=2)

        contexts = make_context(cs, F=2)

        assert contexts.shape == (cs.count, 2 * cs.dimension)
        assert np.array_equal(contexts[:, cs.dimension :], cs.chunks)

    def test_f_one_is_identity(self):
        cs = make_chunks(_mps(4), p=1)

        assert np.array_equal(make_context(cs, F=1), cs.chunks)

    def test_bad_f(self):
        with pytest.raises(InvalidSignal):
            make_context(make_chunks(_mps(4), p=1), F=0)


class TestChunkMasksToFrames:
    def test_drops_padding(self):
        masks = np.array([[1, 0, 1, 0], [0, 1, 0, 1]])

        frames = chunk_masks_to_frames(masks, p=2, n_mels=2, n_frames=3)

        assert np.array_equal(frames, [[1, 0], [1, 0], [0, 1]])

    def test_wrong_dimension(self):
        with pytest.raises(DimensionMismatch):
            chunk_masks_to_frames(np.ones((2, 3)), p=2, n_mels=2, n_frames=3)

    def test_too_few_chunks(self):
        with pytest.raises(DimensionMismatch):
            chunk_masks_to_frames(np.ones((1, 4)), p=2, n_mels=2, n_frames=3)
