"""Character error rate by minimum edit distance alignment."""

from typing import Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from rlmask.recognizers.base import ErrorRate, Transcript

TextLike = Union[str, Transcript]


class EditCounts(BaseModel):
    """Operation counts of one optimal alignment of a hypothesis against a reference."""

    model_config = ConfigDict(frozen=True)

    hits: int = 0
    substitutions: int = 0
    deletions: int = 0
    insertions: int = 0

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def reference_length(self) -> int:
        return self.hits + self.substitutions + self.deletions


def _tokens(text: TextLike) -> list[str]:
    if isinstance(text, Transcript):
        return text.tokens
    return Transcript(text=text).tokens


def edit_table(reference: Sequence, hypothesis: Sequence) -> np.ndarray:
    """Unit-cost edit distance table.

    Entry ``[i, j]`` is the distance between ``reference[:i]`` and ``hypothesis[:j]``. Rows are
    filled one at a time: substitutions and deletions come from the previous row, and the
    insertion chain along the row is a running minimum of ``candidate[k] + (j - k)``.
    """
    n, m = len(reference), len(hypothesis)
    vocabulary: dict = {}
    ref_codes = np.array([vocabulary.setdefault(t, len(vocabulary)) for t in reference])
    hyp_codes = np.array([vocabulary.setdefault(t, len(vocabulary)) for t in hypothesis])
    offsets = np.arange(m + 1, dtype=np.int64)

    table = np.zeros((n + 1, m + 1), dtype=np.int64)
    table[0] = offsets
    for i in range(1, n + 1):
        previous = table[i - 1]
        candidate = np.empty(m + 1, dtype=np.int64)
        candidate[0] = i
        if m:
            mismatch = hyp_codes != ref_codes[i - 1]
            candidate[1:] = np.minimum(previous[:-1] + mismatch, previous[1:] + 1)
        table[i] = np.minimum.accumulate(candidate - offsets) + offsets
    return table


def edit_counts(reference: TextLike, hypothesis: TextLike) -> EditCounts:
    """Backtrace one optimal alignment and count its operations."""
    ref, hyp = _tokens(reference), _tokens(hypothesis)
    table = edit_table(ref, hyp)
    counts = {"hits": 0, "substitutions": 0, "deletions": 0, "insertions": 0}
    i, j = len(ref), len(hyp)
    while i > 0 or j > 0:
        if i > 0 and j > 0 and table[i, j] == table[i - 1, j - 1] + (ref[i - 1] != hyp[j - 1]):
            counts["hits" if ref[i - 1] == hyp[j - 1] else "substitutions"] += 1
            i, j = i - 1, j - 1
        elif i > 0 and table[i, j] == table[i - 1, j] + 1:
            counts["deletions"] += 1
            i -= 1
        else:
            counts["insertions"] += 1
            j -= 1
    return EditCounts(**counts)


def edit_distance(reference: TextLike, hypothesis: TextLike) -> int:
    return int(edit_table(_tokens(reference), _tokens(hypothesis))[-1, -1])


def cer(hypothesis: TextLike, reference: TextLike) -> ErrorRate:
    """(substitutions + deletions + insertions) / reference length.

    Raises:
        ValueError: If the reference has no characters after whitespace removal.
    """
    ref = _tokens(reference)
    if not ref:
        raise ValueError("reference transcript is empty")
    distance = edit_table(ref, _tokens(hypothesis))[-1, -1]
    return ErrorRate(value=float(distance) / len(ref))
