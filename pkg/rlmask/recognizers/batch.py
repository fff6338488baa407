"""Scoring a manifest of utterances with any recognizer."""

import csv
from pathlib import Path
from typing import Sequence

from pydantic import BaseModel, Field, ValidationError

from rlmask.common import Defaults, logger
from rlmask.common.exceptions import DatasetError, RecognizerFailure
from rlmask.common.types import PathType, Recognizer
from rlmask.common.workers import map_ordered
from rlmask.recognizers.base import ErrorRate, RecognitionRequest

MANIFEST_COLUMNS = ("id", "wav_path", "reference")


class BatchResult(BaseModel):
    """Per-utterance error rates and the failures that did not produce one."""

    rates: dict[str, ErrorRate] = Field(default_factory=dict)
    failures: dict[str, str] = Field(default_factory=dict)

    def values(self) -> dict[str, float]:
        return {key: rate.value for key, rate in self.rates.items()}


def read_recognition_manifest(path: PathType) -> list[RecognitionRequest]:
    """Read a CSV manifest with columns ``id``, ``wav_path`` and ``reference``.

    Relative WAV paths are resolved against the manifest directory.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError("recognition manifest `{}` does not exist".format(path))
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        missing = set(MANIFEST_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise DatasetError("manifest `{}` lacks columns {}".format(path, sorted(missing)))
        try:
            return [
                RecognitionRequest(
                    utterance_id=row["id"],
                    wav_path=path.parent / row["wav_path"],
                    reference=row["reference"],
                )
                for row in reader
            ]
        except ValidationError as e:
            raise DatasetError("bad row in `{}`: {}".format(path, e)) from e


def write_recognition_manifest(path: PathType, requests: Sequence[RecognitionRequest]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(MANIFEST_COLUMNS)
        for request in requests:
            writer.writerow([request.utterance_id, str(request.wav_path), request.reference])
    return path


def batch_recognize(
    recognizer: Recognizer,
    requests: Sequence[RecognitionRequest],
    num_threads: int = Defaults.DEFAULT_NUM_THREADS,
) -> BatchResult:
    """Score every request; a failing utterance is recorded without stopping the batch."""
    jobs = map_ordered(
        recognizer.score,
        requests,
        keys=[request.utterance_id for request in requests],
        num_threads=num_threads,
    )
    result = BatchResult()
    for job in jobs:
        if job.ok:
            result.rates[job.key] = job.result
        elif isinstance(job.error, RecognizerFailure):
            logger.warning("Skipping utterance %s: %s", job.key, job.error.reason)
            result.failures[job.key] = job.error.reason
        else:
            raise job.error
    return result
