import numpy as np

from rlmask.common.utils import generate_hex_hash, make_rng, safe_log


def test_safe_log_floors_zeros():
    values = safe_log(np.array([0.0, 1.0, np.e]))

    assert values[0] == np.log(1e-10)
    assert np.allclose(values[1:], [0.0, 1.0])


def test_make_rng_streams():
    assert make_rng(3).integers(1000) == make_rng(3).integers(1000)
    first = make_rng(3, 1).integers(0, 2**31, size=4)
    second = make_rng(3, 2).integers(0, 2**31, size=4)
    assert not np.array_equal(first, second)


def test_hex_hash():
    digest = generate_hex_hash(b"rlmask")

    assert len(digest) == 64
    assert generate_hex_hash(b"rlmask", 8) == digest[:8]
