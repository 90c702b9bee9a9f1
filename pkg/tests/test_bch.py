import itertools

import numpy as np
import pytest

from cvue.bch import BchCode, SUPPORTED_LENGTHS


# (length, message bits, t) triples from the standard BCH tables
KNOWN_CODES = [
    (15, 11, 1),
    (15, 7, 2),
    (15, 5, 3),
    (31, 16, 3),
    (63, 45, 3),
    (127, 99, 4),
    (255, 215, 5),
    (1023, 973, 5),
]


@pytest.mark.parametrize("length,msg_len,t", KNOWN_CODES)
def test_known_code_dimensions(length, msg_len, t):
    code = BchCode.for_length(length, t)
    assert code.msg_len == msg_len
    assert code.length == length


def test_bad_length_rejected():
    with pytest.raises(ValueError, match="2\\^m - 1"):
        BchCode.for_length(1000, 3)
    assert 1023 in SUPPORTED_LENGTHS


def test_repetition_code_limit():
    # t=7 at length 15 is the (15,1) repetition code; t=8 exceeds the design bound
    assert BchCode(4, 7).msg_len == 1
    with pytest.raises(ValueError, match="designed distance"):
        BchCode(4, 8)


def test_exhaustive_correction_15_7_2():
    code = BchCode(4, 2)
    rng = np.random.default_rng(0)
    for _ in range(3):
        msg = rng.integers(0, 2, code.msg_len, dtype=np.uint8)
        word = code.encode(msg)
        for weight in range(code.t + 1):
            for flips in itertools.combinations(range(code.length), weight):
                corrupted = word.copy()
                corrupted[list(flips)] ^= 1
                assert np.array_equal(code.decode(corrupted), msg)


def test_exhaustive_correction_15_5_3():
    code = BchCode(4, 3)
    rng = np.random.default_rng(1)
    msg = rng.integers(0, 2, code.msg_len, dtype=np.uint8)
    word = code.encode(msg)
    for weight in range(code.t + 1):
        for flips in itertools.combinations(range(code.length), weight):
            corrupted = word.copy()
            corrupted[list(flips)] ^= 1
            assert np.array_equal(code.decode(corrupted), msg)


def test_randomized_volume_63_45_3():
    # 1e4 randomized round trips at a length where exhaustion is infeasible
    code = BchCode(6, 3)
    rng = np.random.default_rng(63)
    for _ in range(10_000):
        msg = rng.integers(0, 2, code.msg_len, dtype=np.uint8)
        word = code.encode(msg)
        weight = int(rng.integers(0, code.t + 1))
        word[rng.choice(code.length, size=weight, replace=False)] ^= 1
        assert np.array_equal(code.decode(word), msg)


@pytest.mark.parametrize("m,t", [(5, 3), (6, 3), (7, 4), (10, 5)])
def test_random_correction(m, t):
    code = BchCode(m, t)
    rng = np.random.default_rng(m * 100 + t)
    for _ in range(40):
        msg = rng.integers(0, 2, code.msg_len, dtype=np.uint8)
        word = code.encode(msg)
        weight = int(rng.integers(0, t + 1))
        flips = rng.choice(code.length, size=weight, replace=False)
        word[flips] ^= 1
        assert np.array_equal(code.decode(word), msg)


def test_beyond_capacity_fails_or_miscorrects():
    code = BchCode(4, 2)
    rng = np.random.default_rng(7)
    msg = rng.integers(0, 2, code.msg_len, dtype=np.uint8)
    word = code.encode(msg)
    outcomes = {"failure": 0, "miscorrect": 0, "lucky": 0}
    for _ in range(300):
        corrupted = word.copy()
        corrupted[rng.choice(code.length, size=code.t + 1, replace=False)] ^= 1
        decoded = code.decode(corrupted)
        if decoded is None:
            outcomes["failure"] += 1
        elif np.array_equal(decoded, msg):
            outcomes["lucky"] += 1
        else:
            outcomes["miscorrect"] += 1
    # weight-3 errors on a distance-5 code can never land back on the sent word
    assert outcomes["lucky"] == 0
    assert outcomes["failure"] + outcomes["miscorrect"] == 300


def test_systematic_positions():
    code = BchCode(4, 2)
    msg = np.arange(code.msg_len, dtype=np.uint8) % 2
    word = code.encode(msg)
    assert np.array_equal(word[code.parity_len :], msg)


def test_encode_length_check():
    code = BchCode(4, 2)
    with pytest.raises(ValueError, match="length"):
        code.encode(np.zeros(4, dtype=np.uint8))
    with pytest.raises(ValueError, match="length"):
        code.decode(np.zeros(10, dtype=np.uint8))
