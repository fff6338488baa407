import itertools

import numpy as np
import pytest

from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.masks import (
    apply_mask,
    chunk_ibms,
    compute_ibm,
    expand_shared_masks,
    hamming_distance,
    majority_vote,
    pairwise_hamming,
    shared_chunk_ibm,
)

from . import MaskFixtures


class TestComputeIbm:
    def test_example(self):
        clean = np.array([4.0, 1.0, 0.5, 2.0])
        noise = np.array([1.0, 4.0, 0.5, 2.5])

        assert np.array_equal(compute_ibm(clean, noise), [1, 0, 1, 0])

    def test_ties_favor_speech(self):
        assert np.array_equal(compute_ibm(np.zeros(3), np.zeros(3)), [1, 1, 1])

    def test_values_below_floor_tie(self):
        assert compute_ibm(np.array([1e-40]), np.array([1e-35]))[0] == 1

    def test_stack(self):
        clean = np.array([[1.0, 0.0], [0.0, 1.0]])
        noise = np.array([[0.5, 0.5], [0.5, 0.5]])

        assert np.array_equal(compute_ibm(clean, noise), [[1, 0], [0, 1]])

    @pytest.mark.parametrize("scale", [1e-3, 0.5, 7.5, 1e4])
    def test_common_scaling_keeps_mask(self, scale):
        rng = np.random.default_rng(3)
        clean = rng.uniform(1e-3, 10.0, size=(20, 64))
        noise = rng.uniform(1e-3, 10.0, size=(20, 64))

        assert np.array_equal(compute_ibm(scale * clean, scale * noise), compute_ibm(clean, noise))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            compute_ibm(np.ones(3), np.ones(4))

    def test_negative_power(self):
        with pytest.raises(InvalidSignal):
            compute_ibm(np.array([-1.0]), np.array([1.0]))


class TestApplyMask:
    def test_zeroes_masked_entries(self):
        result = apply_mask(np.array([1.5, 2.5, 3.5]), np.array([1, 0, 1]))

        assert np.array_equal(result, [1.5, 0.0, 3.5])

    def test_non_binary_mask(self):
        with pytest.raises(InvalidSignal):
            apply_mask(np.ones(2), np.array([1, 2]))


class TestHamming(MaskFixtures):
    def test_distance(self):
        assert hamming_distance(np.array([1, 0, 1, 1]), np.array([0, 0, 1, 0])) == 2

    def test_pairwise_matches_elementwise(self, rng):
        samples = self.random_bits(rng, 7, 12)
        centroids = self.random_bits(rng, 3, 12)

        distances = pairwise_hamming(samples, centroids)

        for i, j in itertools.product(range(7), range(3)):
            assert distances[i, j] == hamming_distance(samples[i], centroids[j])


class TestMajorityVote(MaskFixtures):
    def test_ties_resolve_to_one(self):
        members = np.array([[1, 0, 1], [0, 0, 1]], dtype=np.uint8)

        assert np.array_equal(majority_vote(members), [1, 0, 1])

    @pytest.mark.parametrize("dim", [1, 3, 5, 8])
    def test_minimizes_total_distance(self, rng, dim):
        candidates = np.array(list(itertools.product([0, 1], repeat=dim)), dtype=np.uint8)
        for _ in range(10):
            members = self.random_bits(rng, int(rng.integers(1, 9)), dim)

            best = pairwise_hamming(candidates, members).sum(axis=1).min()
            vote = majority_vote(members)

            assert pairwise_hamming(vote[None, :], members).sum() == best

    def test_empty(self):
        with pytest.raises(InvalidSignal):
            majority_vote(np.zeros((0, 4), dtype=np.uint8))


class TestSharedMasks:
    def test_shared_chunk_ibm_sums_frames(self):
        # two frames of two bands; band 0 wins on the sum, band 1 loses
        clean = np.array([[3.0, 0.0, 0.0, 1.0]])
        noise = np.array([[1.0, 1.0, 1.0, 1.0]])

        assert np.array_equal(shared_chunk_ibm(clean, noise, p=2, n_mels=2), [[1, 0]])

    def test_expand(self):
        expanded = expand_shared_masks(np.array([[1, 0]]), p=3)

        assert np.array_equal(expanded, [[1, 0, 1, 0, 1, 0]])

    def test_chunk_ibms_modes(self):
        clean = np.array([[3.0, 0.0, 0.0, 1.0]])
        noise = np.ones((1, 4))

        assert chunk_ibms(clean, noise, p=2, n_mels=2).shape == (1, 4)
        assert chunk_ibms(clean, noise, p=2, n_mels=2, shared_mask=True).shape == (1, 2)
