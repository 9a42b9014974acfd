import numpy as np
import pytest
from hypothesis import given, strategies as st

from dfcw_golay.golay import (
    CodeSizeError,
    code_acf,
    code_xcorr,
    format_code,
    generate_golay_pair,
    mate_orthogonality,
    mate_pair,
    parse_code,
    verify_complementary,
)


def brute_xcorr(x, y):
    """sum_m x[m+k] y[m] for every k, by two plain loops."""
    p, q = len(x), len(y)
    out = {}
    for k in range(-(q - 1), p):
        out[k] = sum(x[m + k] * y[m] for m in range(q) if 0 <= m + k < p)
    return [out[k] for k in sorted(out)]


@pytest.mark.parametrize(
    "m, a, b",
    [
        (0, [1], [1]),
        (1, [1, 1], [1, -1]),
        (2, [1, 1, 1, -1], [1, 1, -1, 1]),
    ],
)
def test_small_pairs(m, a, b):
    ga, gb = generate_golay_pair(m)
    assert ga.tolist() == a
    assert gb.tolist() == b


def test_pair_dtype_is_integer():
    a, b = generate_golay_pair(3)
    assert a.dtype.kind == "i" and b.dtype.kind == "i"


@pytest.mark.parametrize("m", [-1, 13])
def test_pair_size_limits(m):
    with pytest.raises((ValueError, CodeSizeError)):
        generate_golay_pair(m)


@pytest.mark.parametrize(
    "code, expected",
    [
        ([1, 1], [1, 2, 1]),
        ([1, 1, 1, -1], [-1, 0, 1, 4, 1, 0, -1]),
        ([1, 1, -1, 1], [1, 0, -1, 4, -1, 0, 1]),
    ],
)
def test_code_acf_examples(code, expected):
    r = code_acf(code)
    assert r.values.tolist() == expected
    assert r.values[r.zero_lag] == len(code)


@pytest.mark.parametrize(
    "x, y, expected",
    [([1, 1], [1, 1], [1, 2, 1]), ([1, 1], [1, -1], [-1, 0, 1]), ([1], [1], [1])],
)
def test_code_xcorr_examples(x, y, expected):
    assert code_xcorr(x, y).values.tolist() == expected


@given(
    st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=12),
    st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=12),
)
def test_code_xcorr_matches_double_loop(x, y):
    r = code_xcorr(x, y)
    assert r.values.tolist() == brute_xcorr(x, y)
    assert r.zero_lag == len(y) - 1


def test_verify_complementary_examples():
    assert verify_complementary([1, 1], [1, -1])
    assert verify_complementary([1, 1, 1, -1], [1, 1, -1, 1])
    assert not verify_complementary([1, 1], [1, 1])


def test_verify_complementary_length_mismatch():
    with pytest.raises(ValueError):
        verify_complementary([1, 1], [1])


@pytest.mark.parametrize("m", range(0, 9))
def test_generated_pairs_are_complementary(m):
    a, b = generate_golay_pair(m)
    total = code_acf(a).values + code_acf(b).values
    expected = np.zeros_like(total)
    expected[len(a) - 1] = 2 * len(a)
    assert np.array_equal(total, expected)


def test_mate_examples():
    ma, mb = mate_pair([1, 1], [1, -1])
    assert ma.tolist() == [-1, 1] and mb.tolist() == [-1, -1]
    ma, mb = mate_pair([1, 1, 1, -1], [1, 1, -1, 1])
    assert ma.tolist() == [1, -1, 1, 1] and mb.tolist() == [1, -1, -1, -1]


def test_mate_of_mate_negates():
    a, b = generate_golay_pair(1)
    ma, mb = mate_pair(*mate_pair(a, b))
    assert ma.tolist() == (-a).tolist() and mb.tolist() == (-b).tolist()


def test_mate_requires_complementary_pair():
    with pytest.raises(ValueError):
        mate_pair([1, 1], [1, 1])


@pytest.mark.parametrize("m", range(0, 9))
def test_mates_complementary_and_orthogonal(m):
    a, b = generate_golay_pair(m)
    ma, mb = mate_pair(a, b)
    assert verify_complementary(ma, mb)
    assert not np.any(mate_orthogonality(a, b).values)
    cross = code_xcorr(a, ma).values + code_xcorr(b, mb).values
    assert not np.any(cross)


def test_code_text_round_trip():
    a, _ = generate_golay_pair(4)
    assert parse_code(format_code(a)).tolist() == a.tolist()
    assert format_code([1, -1]) == "1,-1"
