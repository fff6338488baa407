import itertools
from functools import lru_cache

import numpy as np
import pytest

from rlmask.recognizers import Transcript, cer, edit_counts, edit_distance
from rlmask.recognizers.cer import edit_table


def _reference_distance(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def distance(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            distance(i - 1, j) + 1,
            distance(i, j - 1) + 1,
            distance(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return distance(len(a), len(b))


def _strings(alphabet: str, max_length: int):
    for length in range(max_length + 1):
        for chars in itertools.product(alphabet, repeat=length):
            yield "".join(chars)


class TestCer:
    def test_examples(self):
        assert cer("abc", "abc").value == 0.0
        assert cer("abd", "abc").value == pytest.approx(1 / 3)
        assert cer("", "abcd").value == 1.0
        assert cer("abcabc", "abc").value == 1.0

    def test_whitespace_ignored(self):
        assert cer("a b  c", "abc").value == 0.0
        assert cer(Transcript(text="ab c"), "a bc").value == 0.0

    def test_insertions_exceed_one(self):
        assert cer("aaaa", "a").value == 3.0

    def test_empty_reference(self):
        with pytest.raises(ValueError):
            cer("abc", "  ")

    def test_exhaustive_small_pairs(self):
        strings = list(_strings("abc", 6))
        for ref in strings:
            if not ref:
                continue
            for hyp in strings:
                if len(ref) + len(hyp) > 6:
                    continue
                expected = _reference_distance(ref, hyp) / len(ref)
                assert cer(hyp, ref).value == pytest.approx(expected)

    def test_random_pairs(self, rng):
        alphabet = np.array(list("abcdefgh"))
        for _ in range(1000):
            ref = "".join(rng.choice(alphabet, size=int(rng.integers(1, 15))))
            hyp = "".join(rng.choice(alphabet, size=int(rng.integers(0, 15))))

            assert edit_distance(ref, hyp) == _reference_distance(ref, hyp)

    def test_table_matches_cell_by_cell_fill(self, rng):
        alphabet = np.array(list("abcd"))
        ref = list(rng.choice(alphabet, size=120))
        hyp = list(rng.choice(alphabet, size=95))

        expected = np.zeros((len(ref) + 1, len(hyp) + 1), dtype=np.int64)
        expected[:, 0] = np.arange(len(ref) + 1)
        expected[0, :] = np.arange(len(hyp) + 1)
        for i in range(1, len(ref) + 1):
            for j in range(1, len(hyp) + 1):
                expected[i, j] = min(
                    expected[i - 1, j - 1] + (ref[i - 1] != hyp[j - 1]),
                    expected[i - 1, j] + 1,
                    expected[i, j - 1] + 1,
                )

        assert np.array_equal(edit_table(ref, hyp), expected)

    def test_long_transcript_with_substitutions(self, rng):
        ref = "".join(rng.choice(np.array(list("abcdefghijklmnopqrstuvwxyz")), size=1000))
        positions = set(rng.choice(1000, size=137, replace=False).tolist())
        hyp = "".join("#" if i in positions else c for i, c in enumerate(ref))

        assert cer(hyp, ref).value == pytest.approx(0.137)


class TestEditCounts:
    def test_example(self):
        counts = edit_counts("kitten", "sitting")

        assert counts.errors == 3
        assert counts.reference_length == 6

    def test_consistent_with_distance(self, rng):
        alphabet = np.array(list("abcd"))
        for _ in range(300):
            ref = "".join(rng.choice(alphabet, size=int(rng.integers(1, 10))))
            hyp = "".join(rng.choice(alphabet, size=int(rng.integers(0, 10))))

            counts = edit_counts(ref, hyp)

            assert counts.errors == edit_distance(ref, hyp)
            assert counts.reference_length == len(ref)
            assert counts.hits + counts.substitutions + counts.insertions == len(hyp)
