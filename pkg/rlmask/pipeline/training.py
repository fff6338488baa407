"""Training stages: the codebook, mask estimator pretraining and RL of the action estimator."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from rlmask.common import logger
from rlmask.common.exceptions import DatasetError
from rlmask.common.types import PathType, Recognizer
from rlmask.common.workers import map_ordered
from rlmask.features import FeatureExtractor, UtteranceFeatures, export_matrix, read_wav
from rlmask.masks import (
    Codebook,
    chunk_ibms,
    expand_shared_masks,
    fit_binary_kmeans,
    load_codebook,
    nearest_clusters,
    save_codebook,
)
from rlmask.pipeline.config import ExperimentConfig
from rlmask.pipeline.dataset import DatasetManifest, ManifestRow
from rlmask.pipeline.workspace import Workspace
from rlmask.policy import (
    Network,
    extend_to_action_head,
    load_network,
    pretrain_mask_estimator,
    save_network,
)
from rlmask.rl import RLContext, RLResult, RLTrainer, RLUtterance


class TrainingUtterance(BaseModel):
    """Features of one training mixture with its clean chunks and ideal masks."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    row: ManifestRow
    features: UtteranceFeatures
    clean_chunks: np.ndarray
    ibms: np.ndarray


def analyze_row(
    row: ManifestRow, extractor: FeatureExtractor, shared_mask: bool
) -> TrainingUtterance:
    """Noisy features, clean chunks and chunk IBMs of a manifest row."""
    noisy = read_wav(row.noisy_path, extractor.sample_rate)
    features = extractor.analyze(noisy)
    clean = read_wav(row.clean_path, extractor.sample_rate)
    noise = read_wav(row.noise_path, extractor.sample_rate)
    clean_chunks = extractor.chunk(extractor.mel_spectrogram(clean))
    noise_chunks = extractor.chunk(extractor.mel_spectrogram(noise))
    ibms = chunk_ibms(
        clean_chunks.chunks, noise_chunks.chunks, extractor.p, extractor.n_mels, shared_mask
    )
    return TrainingUtterance(
        row=row, features=features, clean_chunks=clean_chunks.chunks, ibms=ibms
    )


def analyze_rows(
    rows: Sequence[ManifestRow], config: ExperimentConfig, p: int
) -> list[TrainingUtterance]:
    if not rows:
        raise DatasetError("no utterances to analyze")
    extractor = config.extractor(p)
    jobs = map_ordered(
        lambda row: analyze_row(row, extractor, config.shared_mask_mode),
        rows,
        keys=[row.id for row in rows],
        num_threads=config.jobs,
    )
    for job in jobs:
        if not job.ok:
            raise job.error
    return [job.result for job in jobs]


def build_codebook(
    manifest: DatasetManifest,
    config: ExperimentConfig,
    workspace: Workspace,
    p: Optional[int] = None,
    utterances: Optional[list[TrainingUtterance]] = None,
) -> Codebook:
    """Cluster the IBMs of every training chunk into ``config.A`` centroids and persist them."""
    p = config.p if p is None else p
    utterances = utterances or analyze_rows(manifest.train_rows, config, p)
    ibms = np.concatenate([u.ibms for u in utterances])
    logger.info("Clustering %s chunk masks of dimension %s into %s clusters", *ibms.shape, config.A)

    result = fit_binary_kmeans(
        ibms,
        A=config.A,
        seed=config.seed,
        max_iter=config.kmeans_max_iter,
        shared_mask=config.shared_mask_mode,
    )
    save_codebook(result.codebook, workspace.codebook_path(p))
    export_matrix(
        workspace.plots_dir / "codebook_p{}.{}".format(p, config.export.matrix_format),
        result.codebook.centroids,
        config.export.matrix_format,
    )
    return result.codebook


def _write_loss_log(
    path: PathType, losses: Sequence[float], initial: Optional[float] = None
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["epoch", "loss"])
        if initial is not None:
            writer.writerow([0, "{:.8g}".format(initial)])
        for epoch, loss in enumerate(losses, start=1):
            writer.writerow([epoch, "{:.8g}".format(loss)])
    return path


def run_pretrain(
    manifest: DatasetManifest,
    config: ExperimentConfig,
    workspace: Workspace,
    p: Optional[int] = None,
    utterances: Optional[list[TrainingUtterance]] = None,
) -> Network:
    """Pretrain the mask estimator on (noisy context, chunk IBM) pairs and persist it."""
    p = config.p if p is None else p
    utterances = utterances or analyze_rows(manifest.train_rows, config, p)
    contexts = np.concatenate([u.features.contexts for u in utterances])
    targets = np.concatenate([u.ibms for u in utterances])
    if config.shared_mask_mode:
        targets = expand_shared_masks(targets, p)

    result = pretrain_mask_estimator(
        contexts, targets, config.pretrain_config(), config.pretrain.hidden_layers
    )
    save_network(result.network, workspace.mask_estimator_path(p))
    _write_loss_log(workspace.pretrain_log(p), result.loss_history, result.initial_loss)
    return result.network


def rl_dataset(
    utterances: Sequence[TrainingUtterance], codebook: Codebook, recognizer_kind: str
) -> list[RLUtterance]:
    return [
        RLUtterance(
            utterance_id=u.row.id,
            noisy_path=u.row.noisy_path,
            reference=u.row.reference(recognizer_kind),
            features=u.features,
            clean_chunks=u.clean_chunks,
            oracle_actions=nearest_clusters(u.ibms, codebook),
        )
        for u in utterances
    ]


def run_rl_train(
    manifest: DatasetManifest,
    config: ExperimentConfig,
    workspace: Workspace,
    recognizer: Recognizer,
    p: Optional[int] = None,
    utterances: Optional[list[TrainingUtterance]] = None,
) -> RLResult:
    """Extend the pretrained mask estimator to an action estimator and train it in the loop."""
    p = config.p if p is None else p
    extractor = config.extractor(p)
    codebook = load_codebook(workspace.codebook_path(p))
    pretrained = load_network(workspace.mask_estimator_path(p))
    net = extend_to_action_head(
        pretrained,
        A=codebook.A,
        hidden_units=config.head.hidden_units,
        hidden_layers=config.head.hidden_layers,
        seed=config.seed,
        init_scale=config.head.init_scale,
    )

    utterances = utterances or analyze_rows(manifest.train_rows, config, p)
    trainer = RLTrainer(
        rl_dataset(utterances, codebook, config.recognizer.kind),
        RLContext(
            extractor=extractor,
            codebook=codebook,
            recognizer=recognizer,
            scratch_dir=workspace.scratch_dir(p),
        ),
        config.rl_config(),
        log_path=workspace.rl_log(p),
    )
    result = trainer.run(net)
    save_network(result.network, workspace.action_estimator_path(p))
    return result

