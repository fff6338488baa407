import math

import numpy as np
import pytest

from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.rl import RewardInputs, chunk_errors, chunk_reward, chunk_rewards, utterance_reward


class TestUtteranceReward:
    def test_bounded_and_signed(self):
        grid = np.linspace(0.0, 1.0, 100)
        for z_noisy in grid:
            for z_enhanced in grid:
                R = utterance_reward(RewardInputs(z_noisy=z_noisy, z_enhanced=z_enhanced))

                assert abs(R) < 1.0
                assert np.sign(R) == np.sign(z_noisy - z_enhanced)

    def test_value(self):
        R = utterance_reward(RewardInputs(z_noisy=0.3, z_enhanced=0.2, alpha=10.0))

        assert R == pytest.approx(math.tanh(1.0))

    def test_antisymmetric(self):
        forward = utterance_reward(RewardInputs(z_noisy=0.4, z_enhanced=0.1))
        backward = utterance_reward(RewardInputs(z_noisy=0.1, z_enhanced=0.4))

        assert forward == pytest.approx(-backward)

    def test_no_change_gives_zero(self):
        assert utterance_reward(RewardInputs(z_noisy=0.25, z_enhanced=0.25)) == 0.0

    def test_insertions_above_one_are_allowed(self):
        assert utterance_reward(RewardInputs(z_noisy=1.5, z_enhanced=0.5)) > 0

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"z_noisy": -0.1, "z_enhanced": 0.1},
            {"z_noisy": 0.1, "z_enhanced": float("nan")},
            {"z_noisy": 0.1, "z_enhanced": 0.1, "alpha": 0.0},
        ],
    )
    def test_invalid_inputs(self, kwargs):
        with pytest.raises(ValueError):
            RewardInputs(**kwargs)


class TestChunkReward:
    def test_positive_reward_favors_good_chunks(self):
        assert chunk_reward(0.25, 0.8) == pytest.approx(0.6)
        assert chunk_reward(0.0, 0.8) == pytest.approx(0.8)
        assert chunk_reward(1.0, 0.8) == 0.0

    def test_negative_reward_blames_bad_chunks(self):
        assert chunk_reward(0.25, -0.8) == pytest.approx(-0.2)
        assert chunk_reward(1.0, -0.8) == pytest.approx(-0.8)
        assert chunk_reward(0.0, -0.8) == 0.0

    def test_zero_reward(self):
        assert chunk_reward(0.5, 0.0) == 0.0

    @pytest.mark.parametrize("E", [-0.01, 1.01])
    def test_error_outside_unit_interval(self, E):
        with pytest.raises(InvalidSignal):
            chunk_reward(E, 0.5)

    @pytest.mark.parametrize("R", [0.7, -0.7, 0.0])
    def test_vectorized_matches_scalar(self, rng, R):
        profile = chunk_errors(rng.uniform(0.1, 2, size=(12, 4)), rng.uniform(0.1, 2, size=(12, 4)))

        rewards = chunk_rewards(profile, R)

        assert np.allclose(rewards, [chunk_reward(E, R) for E in profile.normalized])


class TestChunkErrors:
    def test_identical_chunks(self):
        chunks = np.full((3, 4), 2.0)

        profile = chunk_errors(chunks, chunks)

        assert not profile.raw.any()
        assert not profile.normalized.any()

    def test_normalized_by_largest(self):
        clean = np.ones((3, 2))
        enhanced = np.array([[1.0, 1.0], [np.e, 1.0], [np.e, np.e]])

        profile = chunk_errors(clean, enhanced)

        assert np.allclose(profile.raw, [0.0, 1.0, 2.0])
        assert np.allclose(profile.normalized, [0.0, 0.5, 1.0])
        assert len(profile) == 3

    def test_masked_out_chunks_are_floored(self):
        profile = chunk_errors(np.ones((2, 3)), np.zeros((2, 3)))

        assert np.all(np.isfinite(profile.raw))
        assert np.allclose(profile.normalized, 1.0)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            chunk_errors(np.ones((2, 3)), np.ones((3, 3)))
