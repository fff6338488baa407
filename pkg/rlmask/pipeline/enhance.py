"""Test-time enhancement: learned policy, oracle masks, and the nearest-neighbor baseline."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from rlmask.common import SystemName, logger
from rlmask.common.exceptions import DatasetError, ModelFormatError
from rlmask.common.types import IndexArray, PathType
from rlmask.common.utils import safe_log
from rlmask.common.workers import map_ordered
from rlmask.features import FeatureExtractor, Waveform, read_wav, write_wav
from rlmask.masks import Codebook, chunk_ibms, expand_shared_masks, nearest_clusters
from rlmask.pipeline.dataset import ManifestRow
from rlmask.policy import Network, standardization
from rlmask.rl import action_scores, enhance_with_actions, select_actions


def enhance_waveform(
    net: Optional[Network],
    codebook: Codebook,
    noisy: Waveform,
    extractor: FeatureExtractor,
    forced_action: Optional[int] = None,
) -> Waveform:
    """Mask every chunk with the codebook entry chosen by ``net``, or with ``forced_action``."""
    features = extractor.analyze(noisy)
    if forced_action is not None:
        actions = np.full(features.chunks.count, forced_action, dtype=np.int64)
    elif net is None:
        raise ValueError("either a network or a forced action is required")
    else:
        actions = select_actions(action_scores(net, features))
    return enhance_with_actions(extractor, codebook, features, actions)


def enhance(
    model: Optional[Network],
    codebook: Codebook,
    wav_in: PathType,
    extractor: FeatureExtractor,
    wav_out: PathType,
    forced_action: Optional[int] = None,
) -> Path:
    """Enhance a WAV file with the action estimator and write the result."""
    noisy = read_wav(wav_in, extractor.sample_rate)
    return write_wav(wav_out, enhance_waveform(model, codebook, noisy, extractor, forced_action))


def oracle_waveform(
    clean: Waveform,
    noise: Waveform,
    noisy: Waveform,
    extractor: FeatureExtractor,
    shared_mask: bool = False,
) -> Waveform:
    """Enhance with the ideal binary masks computed from the true clean and noise signals."""
    features = extractor.analyze(noisy)
    clean_chunks = extractor.chunk(extractor.mel_spectrogram(clean)).chunks
    noise_chunks = extractor.chunk(extractor.mel_spectrogram(noise)).chunks
    masks = chunk_ibms(clean_chunks, noise_chunks, extractor.p, extractor.n_mels, shared_mask)
    if shared_mask:
        masks = expand_shared_masks(masks, extractor.p)
    return extractor.apply_chunk_masks(features, masks)


def enhance_oracle(
    row: ManifestRow, extractor: FeatureExtractor, wav_out: PathType, shared_mask: bool = False
) -> Path:
    rate = extractor.sample_rate
    enhanced = oracle_waveform(
        read_wav(row.clean_path, rate),
        read_wav(row.noise_path, rate),
        read_wav(row.noisy_path, rate),
        extractor,
        shared_mask,
    )
    return write_wav(wav_out, enhanced)


class NeighborIndex:
    """Training noisy contexts (log domain) and the cluster label of each chunk's ideal mask.

    Distances are measured between standardized log contexts; the mean and standard deviation
    come from the stored contexts unless given.
    """

    def __init__(
        self,
        contexts: np.ndarray,
        labels: np.ndarray,
        mean: Optional[np.ndarray] = None,
        std: Optional[np.ndarray] = None,
    ):
        contexts = np.atleast_2d(np.asarray(contexts, dtype=np.float64))
        labels = np.asarray(labels, dtype=np.int64)
        if contexts.shape[0] == 0:
            raise DatasetError("nearest-neighbor index is empty")
        if labels.shape != (contexts.shape[0],):
            raise DatasetError(
                "{} labels for {} indexed contexts".format(labels.shape[0], contexts.shape[0])
            )
        if mean is None or std is None:
            mean, std = standardization(contexts)
        self.contexts = contexts
        self.labels = labels
        self.mean = np.asarray(mean, dtype=np.float64)
        self.std = np.asarray(std, dtype=np.float64)
        self._tree = cKDTree((contexts - self.mean) / self.std)

    def __len__(self) -> int:
        return int(self.contexts.shape[0])

    @classmethod
    def build(
        cls, raw_contexts: Sequence[np.ndarray], ibms: Sequence[np.ndarray], codebook: Codebook
    ) -> NeighborIndex:
        contexts = safe_log(np.concatenate(list(raw_contexts)))
        labels = nearest_clusters(np.concatenate(list(ibms)), codebook)
        return cls(contexts, labels)

    def nearest(self, raw_contexts: np.ndarray) -> IndexArray:
        """Index of the closest stored context for every query row (power domain)."""
        queries = (safe_log(np.atleast_2d(raw_contexts)) - self.mean) / self.std
        _, index = self._tree.query(queries, k=1)
        return np.asarray(index, dtype=np.int64)

    def query(self, raw_contexts: np.ndarray) -> IndexArray:
        """Cluster label of the nearest training chunk for every query row."""
        return self.labels[self.nearest(raw_contexts)]

    def save(self, path: PathType) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as f:
            np.savez(f, contexts=self.contexts, labels=self.labels, mean=self.mean, std=self.std)
        return path

    @classmethod
    def load(cls, path: PathType) -> NeighborIndex:
        path = Path(path)
        if not path.is_file():
            raise ModelFormatError(path, "file does not exist")
        with np.load(path) as data:
            missing = {"contexts", "labels", "mean", "std"} - set(data.files)
            if missing:
                raise ModelFormatError(path, "missing arrays {}".format(sorted(missing)))
            return cls(data["contexts"], data["labels"], data["mean"], data["std"])


def baseline_1nn_waveform(
    index: NeighborIndex, codebook: Codebook, noisy: Waveform, extractor: FeatureExtractor
) -> Waveform:
    features = extractor.analyze(noisy)
    return enhance_with_actions(extractor, codebook, features, index.query(features.contexts))


def baseline_1nn(
    index: NeighborIndex,
    codebook: Codebook,
    wav_in: PathType,
    extractor: FeatureExtractor,
    wav_out: PathType,
) -> Path:
    """Enhance a WAV file choosing every chunk's mask by nearest-neighbor lookup."""
    noisy = read_wav(wav_in, extractor.sample_rate)
    return write_wav(wav_out, baseline_1nn_waveform(index, codebook, noisy, extractor))


def enhance_rows(
    rows: Sequence[ManifestRow],
    system: str,
    out_dir: PathType,
    extractor: FeatureExtractor,
    codebook: Optional[Codebook] = None,
    model: Optional[Network] = None,
    index: Optional[NeighborIndex] = None,
    shared_mask: bool = False,
    num_threads: int = 1,
) -> list[Path]:
    """Enhance every row with one system, writing ``<out_dir>/<id>.wav``."""
    out_dir = Path(out_dir)

    def run(row: ManifestRow) -> Path:
        wav_out = out_dir / "{}.wav".format(row.id)
        if system == SystemName.ORACLE:
            return enhance_oracle(row, extractor, wav_out, shared_mask)
        if system == SystemName.ONE_NN:
            return baseline_1nn(index, codebook, row.noisy_path, extractor, wav_out)
        return enhance(model, codebook, row.noisy_path, extractor, wav_out)

    jobs = map_ordered(run, rows, keys=[row.id for row in rows], num_threads=num_threads)
    for job in jobs:
        if not job.ok:
            raise job.error
    logger.info("Enhanced %s utterances with %s into %s", len(jobs), system, out_dir)
    return [job.result for job in jobs]
