"""Ideal binary masks and the clustered mask codebook."""

from .codebook import (
    Codebook,
    KMeansResult,
    chunk_masks,
    fit_binary_kmeans,
    kmeans_binary,
    load_codebook,
    nearest_cluster,
    nearest_clusters,
    save_codebook,
    select_mask,
    select_masks,
)
from .ibm import (
    apply_mask,
    chunk_ibms,
    compute_ibm,
    expand_shared_masks,
    hamming_distance,
    majority_vote,
    pairwise_hamming,
    shared_chunk_ibm,
)

__all__ = [
    "Codebook",
    "KMeansResult",
    "apply_mask",
    "chunk_ibms",
    "chunk_masks",
    "compute_ibm",
    "expand_shared_masks",
    "fit_binary_kmeans",
    "hamming_distance",
    "kmeans_binary",
    "load_codebook",
    "majority_vote",
    "nearest_cluster",
    "nearest_clusters",
    "pairwise_hamming",
    "save_codebook",
    "select_mask",
    "select_masks",
    "shared_chunk_ibm",
]
