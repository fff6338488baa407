import numpy as np
import pytest


class MaskFixtures:
    @pytest.fixture
    def clustered_bits(self):
        """Three well-separated prototypes, each with a few flipped bits per member."""
        rng = np.random.default_rng(42)
        prototypes = np.array(
            [[1] * 8 + [0] * 8, [0] * 8 + [1] * 8, [1, 0] * 8],
            dtype=np.uint8,
        )
        members = []
        for prototype in prototypes:
            for _ in range(20):
                member = prototype.copy()
                flips = rng.choice(16, size=2, replace=False)
                member[flips] ^= 1
                members.append(member)
        return np.array(members, dtype=np.uint8)

    @staticmethod
    def random_bits(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
        return rng.integers(0, 2, size=(n, dim), dtype=np.uint8)
