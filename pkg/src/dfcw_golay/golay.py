"""Binary Golay complementary pairs, their mates, and exact code correlations.

All correlations here are integer arithmetic on ``int64`` arrays; complementarity
is an exact identity and is checked as one.
"""

from dataclasses import dataclass

import numpy as np

MAX_CODE_LENGTH = 4096


class CodeSizeError(ValueError):
    """Requested code length exceeds the configured maximum."""


@dataclass(frozen=True)
class Correlation:
    """Full aperiodic correlation with the position of zero lag.

    ``values[zero_lag + k]`` holds lag ``k``.
    """

    values: np.ndarray
    zero_lag: int

    def __len__(self):
        return len(self.values)

    def lag(self, k):
        return self.values[self.zero_lag + k]

    @property
    def lags(self):
        return np.arange(len(self.values)) - self.zero_lag


def as_code(x):
    """Validate and return ``x`` as an ``int64`` array of +1/-1."""
    code = np.asarray(x)
    if code.ndim != 1 or code.size == 0:
        raise ValueError("a binary code must be a non-empty 1-D sequence")
    if not np.all((code == 1) | (code == -1)):
        raise ValueError("binary code elements must be +1 or -1")
    return code.astype(np.int64)


def generate_golay_pair(m, max_length=MAX_CODE_LENGTH):
    """Golay complementary pair of length ``2**m`` by recursive doubling.

    Starts from ``([1], [1])`` and applies ``A' = A|B``, ``B' = A|-B``.
    """
    if m < 0:
        raise ValueError(f"length exponent must be non-negative, got {m}")
    if 2**m > max_length:
        raise CodeSizeError(f"code length 2**{m} exceeds maximum {max_length}")
    a = np.array([1], dtype=np.int64)
    b = np.array([1], dtype=np.int64)
    for _ in range(m):
        a, b = np.concatenate([a, b]), np.concatenate([a, -b])
    return a, b


def code_xcorr(x, y):
    """Aperiodic cross-correlation ``R[k] = sum_m x[m+k] * y[m]``.

    This is the coefficient of ``z**-k`` in ``X(z) Y(1/z)``. Lags run from
    ``-(len(y)-1)`` to ``len(x)-1``.
    """
    x = as_code(x)
    y = as_code(y)
    return Correlation(np.convolve(x, y[::-1]), len(y) - 1)


def code_acf(x):
    """Aperiodic autocorrelation; ``2N-1`` lags, zero lag equal to ``N``."""
    return code_xcorr(x, x)


def verify_complementary(a, b):
    """True iff the ACFs of ``a`` and ``b`` sum to ``2N`` at zero lag and 0 elsewhere."""
    a = as_code(a)
    b = as_code(b)
    if len(a) != len(b):
        raise ValueError(f"code lengths differ: {len(a)} != {len(b)}")
    total = code_acf(a).values + code_acf(b).values
    expected = np.zeros_like(total)
    expected[len(a) - 1] = 2 * len(a)
    return bool(np.array_equal(total, expected))


def mate_pair(a, b):
    """Mates ``(reverse(b), -reverse(a))`` of a complementary pair."""
    a = as_code(a)
    b = as_code(b)
    if not verify_complementary(a, b):
        raise ValueError("input codes are not a complementary pair")
    return b[::-1].copy(), -a[::-1]


def mate_orthogonality(a, b):
    """Sum of the cross-correlations of ``(a, b)`` with their mates (all zeros for a pair)."""
    ma, mb = b[::-1], -np.asarray(a)[::-1]
    return Correlation(code_xcorr(a, ma).values + code_xcorr(b, mb).values, len(a) - 1)


def format_code(code):
    return ",".join(str(int(v)) for v in code)


def parse_code(line):
    return as_code([int(tok) for tok in line.strip().split(",") if tok.strip()])
