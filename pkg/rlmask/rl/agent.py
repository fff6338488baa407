"""Applying an action estimator to an utterance."""

import numpy as np

from rlmask.common.types import IndexArray
from rlmask.features import FeatureExtractor, UtteranceFeatures, Waveform
from rlmask.masks import Codebook, chunk_masks
from rlmask.policy import Network, forward


def action_scores(net: Network, features: UtteranceFeatures) -> np.ndarray:
    """Action vector of every chunk, one row per chunk."""
    return np.atleast_2d(forward(net, features.contexts))


def select_actions(scores: np.ndarray) -> IndexArray:
    """Highest-scoring action per chunk, lowest index on ties."""
    return np.argmax(np.atleast_2d(scores), axis=1)


def enhance_with_actions(
    extractor: FeatureExtractor,
    codebook: Codebook,
    features: UtteranceFeatures,
    actions: np.ndarray,
) -> Waveform:
    """Resynthesize the noisy utterance masked by the codebook entries ``actions``."""
    return extractor.apply_chunk_masks(features, chunk_masks(codebook, actions, extractor.p))
