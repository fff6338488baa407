"""Target action vectors for the supervised policy update."""

import numpy as np

from rlmask.common.exceptions import DimensionMismatch, InvalidSignal
from rlmask.common.types import FloatArray


def _check_index(index: int, size: int, what: str) -> int:
    if not 0 <= index < size:
        raise IndexError("{} index {} out of range for {} actions".format(what, index, size))
    return int(index)


def update_action(a_pp: np.ndarray, a_pred: int, a_oracle: int, r_c: float, R: float) -> FloatArray:
    """Target vector for one chunk.

    Starts from a copy of the predicted scores ``a_pp``. A positive reward sets the predicted
    action to ``r_c + max(a_pp)``; a negative one raises the oracle action to
    ``a_pp[a_oracle] - r_c``. A zero reward leaves the scores unchanged.
    """
    a_pp = np.asarray(a_pp, dtype=np.float64)
    if a_pp.ndim != 1 or a_pp.size == 0:
        raise InvalidSignal("action vector must be a non-empty vector")
    if not np.all(np.isfinite(a_pp)):
        raise InvalidSignal("action vector contains non-finite values")
    a_pred = _check_index(a_pred, a_pp.size, "predicted")
    a_oracle = _check_index(a_oracle, a_pp.size, "oracle")

    target = a_pp.copy()
    if R > 0:
        target[a_pred] = r_c + a_pp.max()
    elif R < 0:
        target[a_oracle] = a_pp[a_oracle] - r_c
    return target


def build_targets(
    predictions: np.ndarray,
    predicted: np.ndarray,
    oracle: np.ndarray,
    rewards: np.ndarray,
    R: float,
) -> FloatArray:
    """``update_action`` for every chunk of an utterance at once.

    Args:
        predictions: Scores, one row per chunk.
        predicted: Chosen action per chunk.
        oracle: Codebook index closest to each chunk's ideal mask.
        rewards: Chunk rewards.
        R: Utterance reward.
    """
    predictions = np.atleast_2d(np.asarray(predictions, dtype=np.float64))
    n_chunks, n_actions = predictions.shape
    predicted = np.asarray(predicted, dtype=np.int64)
    oracle = np.asarray(oracle, dtype=np.int64)
    rewards = np.asarray(rewards, dtype=np.float64)
    for name, values in (("predicted", predicted), ("oracle", oracle), ("rewards", rewards)):
        if values.shape != (n_chunks,):
            raise DimensionMismatch("{} per chunk".format(name), (n_chunks,), values.shape)
    indices = np.concatenate([predicted, oracle])
    if np.any((indices < 0) | (indices >= n_actions)):
        raise IndexError("action index out of range for {} actions".format(n_actions))

    targets = predictions.copy()
    rows = np.arange(n_chunks)
    if R > 0:
        targets[rows, predicted] = rewards + predictions.max(axis=1)
    elif R < 0:
        targets[rows, oracle] = predictions[rows, oracle] - rewards
    return targets
