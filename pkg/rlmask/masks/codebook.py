"""Binary codebook of clustered ideal binary masks."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from rlmask.common import Defaults, logger
from rlmask.common.exceptions import ClusteringError, DimensionMismatch, ModelFormatError
from rlmask.common.types import BitArray, IndexArray, PathType
from rlmask.common.utils import make_rng
from rlmask.masks.ibm import as_bits, expand_shared_masks, majority_vote, pairwise_hamming

CODEBOOK_FORMAT = "rlmask-codebook"


class Codebook(BaseModel):
    """The ``A`` centroid masks, one row per cluster.

    Attributes:
        centroids: ``A x dimension`` binary matrix.
        seed: Seed of the clustering run that produced the codebook.
        iterations: Lloyd iterations performed.
        shared_mask: Whether every centroid is a single-frame mask replicated over a chunk.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    centroids: np.ndarray
    seed: int = 0
    iterations: int = Field(default=0, ge=0)
    shared_mask: bool = False

    @field_validator("centroids", mode="before")
    @classmethod
    def _check_centroids(cls, value):
        array = as_bits(value)
        if array.ndim != 2:
            raise ValueError("centroids must form a matrix")
        if array.shape[0] < 2:
            raise ValueError("a codebook needs at least 2 clusters, got {}".format(array.shape[0]))
        array.setflags(write=False)
        return array

    @property
    def A(self) -> int:
        return int(self.centroids.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.centroids.shape[1])


class KMeansResult(BaseModel):
    """Codebook plus the trace of the clustering run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    codebook: Codebook
    assignments: np.ndarray
    objective_history: list[int]
    converged: bool


def _initial_centroids(samples: BitArray, A: int, rng: np.random.Generator) -> BitArray:
    unique = np.unique(samples, axis=0)
    pool = unique if unique.shape[0] >= A else samples
    return pool[np.sort(rng.choice(pool.shape[0], size=A, replace=False))].copy()


def _update_centroids(
    samples: BitArray, centroids: BitArray, assignments: IndexArray, distances: np.ndarray
) -> BitArray:
    A = centroids.shape[0]
    updated = centroids.copy()
    counts = np.bincount(assignments, minlength=A)
    for a in np.flatnonzero(counts):
        updated[a] = majority_vote(samples[assignments == a])

    empty = np.flatnonzero(counts == 0)
    if empty.size:
        own_distance = distances[np.arange(samples.shape[0]), assignments]
        farthest = np.argsort(-own_distance, kind="stable")
        for a, sample_index in zip(empty, farthest):
            logger.warning(
                "Cluster %s is empty, re-seeding with sample %s (distance %s)",
                a,
                sample_index,
                own_distance[sample_index],
            )
            updated[a] = samples[sample_index]
    return updated


def fit_binary_kmeans(
    ibms: np.ndarray,
    A: int = Defaults.NUM_CLUSTERS,
    seed: int = 0,
    max_iter: int = Defaults.KMEANS_MAX_ITER,
    shared_mask: bool = False,
) -> KMeansResult:
    """Lloyd iterations under Hamming distance with per-bit majority centroids.

    Stops at an assignment fixpoint or after ``max_iter`` updates. The total within-cluster
    distance is checked after every iteration and must never increase.

    Raises:
        ClusteringError: If there are fewer samples than clusters, or the objective increases.
    """
    samples = as_bits(ibms)
    if samples.ndim != 2:
        raise ClusteringError("samples must form a matrix, got shape {}".format(samples.shape))
    if A < 2:
        raise ClusteringError("at least 2 clusters are required, got {}".format(A))
    if samples.shape[0] < A:
        raise ClusteringError(
            "cannot form {} clusters from {} samples".format(A, samples.shape[0])
        )

    rng = make_rng(seed)
    centroids = _initial_centroids(samples, A, rng)
    distances = pairwise_hamming(samples, centroids)
    assignments = np.argmin(distances, axis=1)
    objective = int(distances[np.arange(samples.shape[0]), assignments].sum())
    history = [objective]

    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        centroids = _update_centroids(samples, centroids, assignments, distances)
        distances = pairwise_hamming(samples, centroids)
        new_assignments = np.argmin(distances, axis=1)
        new_objective = int(distances[np.arange(samples.shape[0]), new_assignments].sum())
        if new_objective > objective:
            raise ClusteringError(
                "objective increased from {} to {} at iteration {}".format(
                    objective, new_objective, iterations
                )
            )
        history.append(new_objective)
        objective = new_objective

        converged = np.array_equal(new_assignments, assignments)
        assignments = new_assignments
        if converged:
            break

    logger.info(
        "Binary k-means: %s samples, %s clusters, %s iterations, objective %s, converged=%s",
        samples.shape[0],
        A,
        iterations,
        objective,
        converged,
    )
    codebook = Codebook(
        centroids=centroids, seed=seed, iterations=iterations, shared_mask=shared_mask
    )
    return KMeansResult(
        codebook=codebook,
        assignments=assignments,
        objective_history=history,
        converged=converged,
    )


def kmeans_binary(
    ibms: np.ndarray,
    A: int = Defaults.NUM_CLUSTERS,
    seed: int = 0,
    max_iter: int = Defaults.KMEANS_MAX_ITER,
) -> Codebook:
    """Cluster binary mask vectors into an ``A``-centroid codebook."""
    return fit_binary_kmeans(ibms, A=A, seed=seed, max_iter=max_iter).codebook


def nearest_clusters(vectors: np.ndarray, cb: Codebook) -> IndexArray:
    """Index of the closest centroid for every row, lowest index on ties."""
    vectors = as_bits(np.atleast_2d(vectors))
    if vectors.shape[1] != cb.dimension:
        raise DimensionMismatch("mask dimension", cb.dimension, vectors.shape[1])
    return np.argmin(pairwise_hamming(vectors, cb.centroids), axis=1)


def nearest_cluster(v: np.ndarray, cb: Codebook) -> int:
    """Index of the centroid closest to ``v`` in Hamming distance."""
    v = np.asarray(v)
    if v.ndim != 1:
        raise DimensionMismatch("mask vector rank", 1, v.ndim)
    return int(nearest_clusters(v, cb)[0])


def select_mask(cb: Codebook, a: int) -> BitArray:
    """Centroid ``a`` (0-based) of the codebook."""
    if not 0 <= a < cb.A:
        raise IndexError("cluster index {} outside [0, {})".format(a, cb.A))
    return cb.centroids[a]


def select_masks(cb: Codebook, indices: np.ndarray) -> BitArray:
    """Centroids for a sequence of cluster indices."""
    indices = np.asarray(indices, dtype=np.int64)
    if np.any(indices < 0) or np.any(indices >= cb.A):
        raise IndexError("cluster indices outside [0, {})".format(cb.A))
    return cb.centroids[indices]


def chunk_masks(cb: Codebook, indices: np.ndarray, p: int) -> BitArray:
    """Full ``p``-frame chunk masks for a sequence of cluster indices."""
    masks = select_masks(cb, indices)
    return expand_shared_masks(masks, p) if cb.shared_mask else masks


class CodebookHeader(BaseModel):
    format: str = CODEBOOK_FORMAT
    version: int = Defaults.FORMAT_VERSION
    dimension: int
    clusters: int
    seed: int
    iterations: int
    shared_mask: bool = False


def save_codebook(cb: Codebook, path: PathType) -> Path:
    """Write a JSON header line followed by the row-major centroid bits, packed 8 per byte."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = CodebookHeader(
        dimension=cb.dimension,
        clusters=cb.A,
        seed=cb.seed,
        iterations=cb.iterations,
        shared_mask=cb.shared_mask,
    )
    payload = np.packbits(cb.centroids.reshape(-1), bitorder="big").tobytes()
    path.write_bytes(header.model_dump_json().encode("utf-8") + b"\n" + payload)
    return path


def load_codebook(path: PathType, expected_dimension: Optional[int] = None) -> Codebook:
    """Read a codebook written by ``save_codebook``."""
    path = Path(path)
    if not path.is_file():
        raise ModelFormatError(path, "file does not exist")
    raw = path.read_bytes()
    header_line, _, payload = raw.partition(b"\n")
    try:
        header = CodebookHeader.model_validate_json(header_line)
    except ValidationError as e:
        raise ModelFormatError(path, "bad header: {}".format(e)) from e
    if header.format != CODEBOOK_FORMAT or header.version != Defaults.FORMAT_VERSION:
        raise ModelFormatError(
            path, "unsupported format {} v{}".format(header.format, header.version)
        )

    n_bits = header.dimension * header.clusters
    if len(payload) != (n_bits + 7) // 8:
        raise ModelFormatError(path, "payload has {} bytes".format(len(payload)))
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), count=n_bits, bitorder="big")
    if expected_dimension is not None and header.dimension != expected_dimension:
        raise DimensionMismatch("codebook dimension", expected_dimension, header.dimension)

    return Codebook(
        centroids=bits.reshape(header.clusters, header.dimension),
        seed=header.seed,
        iterations=header.iterations,
        shared_mask=header.shared_mask,
    )
