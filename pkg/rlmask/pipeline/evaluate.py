"""Evaluation of enhanced test sets and the experiment report."""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from rlmask.common import MatrixFormat, SystemName, logger
from rlmask.common.exceptions import DatasetError, InvalidAudioFile
from rlmask.common.types import PathType, Recognizer
from rlmask.common.workers import map_ordered
from rlmask.features import (
    FeatureExtractor,
    export_matrix,
    log_spectral_distance,
    read_wav,
    segmental_snr,
)
from rlmask.pipeline.dataset import DatasetManifest, ManifestRow
from rlmask.pipeline.workspace import Workspace
from rlmask.recognizers import RecognitionRequest, batch_recognize

REPORT_COLUMNS = (
    "system",
    "snr_db",
    "utterances",
    "mean_error_rate",
    "relative_reduction_pct",
    "mean_segsnr_db",
    "mean_lsd_db",
)
PER_UTTERANCE_COLUMNS = ("system", "id", "snr_db", "error_rate", "segsnr_db", "lsd_db", "failure")
# Failures of a single file; they are recorded on the utterance.
OBJECTIVE_ERRORS = (ValueError, InvalidAudioFile)


def relative_reduction(baseline: float, system: float) -> float:
    """``(baseline - system) / baseline`` in percent."""
    if baseline <= 0:
        raise ValueError("relative reduction needs a positive baseline, got {}".format(baseline))
    return 100.0 * (baseline - system) / baseline


class UtteranceScore(BaseModel):
    system: str
    id: str
    snr_db: float
    error_rate: Optional[float] = None
    segsnr_db: Optional[float] = None
    lsd_db: Optional[float] = None
    failure: Optional[str] = None


class ReportRow(BaseModel):
    system: str
    snr_db: float
    utterances: int
    mean_error_rate: Optional[float]
    relative_reduction_pct: Optional[float] = None
    mean_segsnr_db: Optional[float] = None
    mean_lsd_db: Optional[float] = None


class Report(BaseModel):
    """Per-condition means, reductions against the noisy input, and per-utterance scores."""

    rows: list[ReportRow] = Field(default_factory=list)
    utterances: list[UtteranceScore] = Field(default_factory=list)
    missing: dict[str, list[str]] = Field(default_factory=dict)

    @classmethod
    def from_scores(
        cls, scores: Sequence[UtteranceScore], missing: Optional[dict[str, list[str]]] = None
    ) -> Report:
        groups: dict[tuple[str, float], list[UtteranceScore]] = defaultdict(list)
        for score in scores:
            groups[(score.system, score.snr_db)].append(score)

        rows = []
        for (system, snr_db), members in groups.items():
            rows.append(
                ReportRow(
                    system=system,
                    snr_db=snr_db,
                    utterances=len(members),
                    mean_error_rate=_mean_of([m.error_rate for m in members]),
                    mean_segsnr_db=_mean_of([m.segsnr_db for m in members]),
                    mean_lsd_db=_mean_of([m.lsd_db for m in members]),
                )
            )

        baselines = {
            row.snr_db: row.mean_error_rate
            for row in rows
            if row.system == SystemName.NOISY and row.mean_error_rate
        }
        for row in rows:
            baseline = baselines.get(row.snr_db)
            if row.system != SystemName.NOISY and baseline and row.mean_error_rate is not None:
                row.relative_reduction_pct = relative_reduction(baseline, row.mean_error_rate)
        return cls(rows=rows, utterances=list(scores), missing=missing or {})

    def row(self, system: str, snr_db: float) -> ReportRow:
        for row in self.rows:
            if row.system == system and row.snr_db == snr_db:
                return row
        raise KeyError((system, snr_db))

    def write_csv(self, path: PathType) -> Path:
        return _write_rows(path, REPORT_COLUMNS, [_format_row(r.model_dump()) for r in self.rows])

    def write_per_utterance(self, path: PathType) -> Path:
        return _write_rows(
            path, PER_UTTERANCE_COLUMNS, [_format_row(s.model_dump()) for s in self.utterances]
        )

    @classmethod
    def from_per_utterance(cls, path: PathType) -> Report:
        path = Path(path)
        if not path.is_file():
            raise DatasetError("`{}` does not exist; run `evaluate` first".format(path))
        with open(path, newline="", encoding="utf-8") as f:
            scores = [
                UtteranceScore(**{key: value or None for key, value in row.items()})
                for row in csv.DictReader(f)
            ]
        return cls.from_scores(scores)

    def format_table(self) -> str:
        header = "{:<10} {:>7} {:>5} {:>10} {:>10} {:>9} {:>8}".format(
            "system", "snr_db", "n", "error", "reduction", "segsnr", "lsd"
        )
        lines = [header]
        for r in self.rows:
            lines.append(
                "{:<10} {:>7g} {:>5} {:>10} {:>10} {} {}".format(
                    r.system,
                    r.snr_db,
                    r.utterances,
                    "-" if r.mean_error_rate is None else "{:.2%}".format(r.mean_error_rate),
                    "-"
                    if r.relative_reduction_pct is None
                    else "{:.2f}%".format(r.relative_reduction_pct),
                    _format_db(r.mean_segsnr_db, 9),
                    _format_db(r.mean_lsd_db, 8),
                )
            )
        return "\n".join(lines)


def _mean_of(values: Sequence[Optional[float]]) -> Optional[float]:
    present = [value for value in values if value is not None]
    return float(np.mean(present)) if present else None


def _format_db(value: Optional[float], width: int) -> str:
    return "-".rjust(width) if value is None else "{:>{}.2f}".format(value, width)


def _format_row(record: dict) -> list:
    out = []
    for value in record.values():
        if value is None:
            out.append("")
        elif isinstance(value, float):
            out.append("{:.6f}".format(value))
        else:
            out.append(value)
    return out


def _write_rows(path: PathType, columns: Sequence[str], rows: Sequence[list]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
    return path


def system_wav_path(row: ManifestRow, system: str, workspace: Workspace) -> Path:
    if system == SystemName.NOISY:
        return row.noisy_path
    if system == SystemName.CLEAN:
        return row.clean_path
    return workspace.enhanced_path(system, row.id)


def objective_scores(
    clean_path: Path, wav_path: Path, extractor: FeatureExtractor
) -> tuple[float, float]:
    """Segmental SNR and log-spectral distance of a processed file against its clean reference."""
    clean = read_wav(clean_path, extractor.sample_rate)
    processed = read_wav(wav_path, extractor.sample_rate)
    reference = extractor.mel_spectrogram(clean)
    return (
        segmental_snr(clean, processed),
        log_spectral_distance(reference, extractor.mel_spectrogram(processed)),
    )


def evaluate(
    manifest: DatasetManifest,
    workspace: Workspace,
    recognizer: Recognizer,
    systems: Sequence[str],
    extractor: FeatureExtractor,
    recognizer_kind: str,
    num_threads: int = 1,
) -> Report:
    """Score every test mixture under every system.

    Systems whose outputs are missing are listed in ``Report.missing``; the others are
    evaluated anyway.
    """
    rows = manifest.test_rows
    if not rows:
        raise DatasetError("the manifest has no test rows")

    scores: list[UtteranceScore] = []
    missing: dict[str, list[str]] = {}
    for system in systems:
        available = [row for row in rows if system_wav_path(row, system, workspace).is_file()]
        absent = [row.id for row in rows if row not in available]
        if absent:
            logger.warning("System %s lacks %s of %s outputs", system, len(absent), len(rows))
            missing[system] = absent
        if not available:
            continue

        paths = {row.id: system_wav_path(row, system, workspace) for row in available}
        requests = [
            RecognitionRequest(
                utterance_id=row.id,
                wav_path=paths[row.id],
                reference=row.reference(recognizer_kind),
            )
            for row in available
        ]
        recognized = batch_recognize(recognizer, requests, num_threads)
        objective = map_ordered(
            lambda row: objective_scores(row.clean_path, paths[row.id], extractor),
            available,
            keys=[row.id for row in available],
            num_threads=num_threads,
        )
        for row, job in zip(available, objective):
            rate = recognized.rates.get(row.id)
            failure = recognized.failures.get(row.id)
            segsnr_db = lsd_db = None
            if job.ok:
                segsnr_db, lsd_db = job.result
            elif isinstance(job.error, OBJECTIVE_ERRORS):
                logger.warning("No objective scores for %s/%s: %s", system, row.id, job.error)
                failure = failure or str(job.error)
            else:
                raise job.error
            scores.append(
                UtteranceScore(
                    system=system,
                    id=row.id,
                    snr_db=row.snr_db,
                    error_rate=None if rate is None else rate.value,
                    segsnr_db=segsnr_db,
                    lsd_db=lsd_db,
                    failure=failure,
                )
            )
        logger.info("Evaluated %s on %s utterances", system, len(available))
    return Report.from_scores(scores, missing)


def export_plot_data(
    report: Report,
    manifest: DatasetManifest,
    workspace: Workspace,
    extractor: FeatureExtractor,
    systems: Sequence[str],
    n_spectrograms: int = 1,
    fmt: str = MatrixFormat.GNUPLOT,
) -> list[Path]:
    """Per-utterance series per system and log mel spectrograms of the first test utterances."""
    written = []
    by_system: dict[str, list[UtteranceScore]] = defaultdict(list)
    for score in report.utterances:
        by_system[score.system].append(score)
    for system, members in by_system.items():
        series = np.array(
            [
                [i, m.snr_db, m.error_rate, m.segsnr_db, m.lsd_db]
                for i, m in enumerate(members)
            ],
            dtype=np.float64,
        )
        path = workspace.plots_dir / "per_utterance_{}.{}".format(system, fmt)
        written.append(export_matrix(path, series, fmt))

    for row in manifest.test_rows[:n_spectrograms]:
        for system in systems:
            path = system_wav_path(row, system, workspace)
            if not path.is_file():
                continue
            mps = extractor.mel_spectrogram(read_wav(path, extractor.sample_rate))
            written.append(
                export_matrix(
                    workspace.plots_dir / "spectrogram_{}_{}.{}".format(row.id, system, fmt),
                    10.0 * np.log10(np.maximum(mps.values, 1e-10)).T,
                    fmt,
                )
            )
    return written
