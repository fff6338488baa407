import numpy as np
import pytest

from rlmask.common import OutputActivation
from rlmask.policy import init_network


class PolicyFixtures:
    @pytest.fixture
    def toy_problem(self):
        """Positive power-like inputs with a binary target that depends on the first feature."""
        rng = np.random.default_rng(0)
        inputs = rng.uniform(0.01, 10.0, size=(64, 6))
        targets = (inputs[:, :2] > 3.0).astype(float)
        return inputs, targets

    @pytest.fixture
    def small_net(self):
        return init_network([5, 4, 3], OutputActivation.SOFTMAX, seed=3, log_input=False)
