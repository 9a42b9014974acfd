"""Aperiodic complex correlation: direct and FFT paths, plus peak metrics.

Convention used throughout: ``R[k] = sum_m x[m] * conj(y[m + k])`` for lags
``k = -(len(x)-1) .. len(y)-1``.
"""

import numpy as np

from .chips import SampledWaveform
from .golay import Correlation

DB_FLOOR = -300.0
# Above this many multiply-adds the FFT path is used by default.
_DIRECT_WORK_LIMIT = 1 << 16


def _samples(x):
    if isinstance(x, SampledWaveform):
        x = x.samples
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("correlation inputs must be non-empty 1-D sequences")
    return x


def next_pow2(n):
    return 1 << max(0, int(n - 1).bit_length())


def xcorr_direct(x, y):
    """Direct O(PQ) correlation; the reference the FFT path is tested against."""
    x = _samples(x)
    y = _samples(y)
    p, q = len(x), len(y)
    out = np.zeros(p + q - 1, dtype=np.complex128)
    yc = np.conj(y)
    # x[m] pairs with y[m + k]; lag k sits at index k + p - 1
    if p <= q:
        for m in range(p):
            out[p - 1 - m : p - 1 - m + q] += x[m] * yc
    else:
        for j in range(q):
            out[j : j + p] += x[::-1] * yc[j]
    return Correlation(out, p - 1)


def xcorr_fft(x, y):
    """FFT correlation, zero-padded to the next power of two >= P+Q-1."""
    x = _samples(x)
    y = _samples(y)
    p, q = len(x), len(y)
    nfft = next_pow2(p + q - 1)
    spec = np.fft.fft(x[::-1], nfft) * np.fft.fft(np.conj(y), nfft)
    return Correlation(np.fft.ifft(spec)[: p + q - 1], p - 1)


def xcorr_full(x, y, method="auto"):
    """All ``P+Q-1`` aperiodic lags of ``sum_m x[m] conj(y[m+k])``.

    ``method`` is ``"direct"``, ``"fft"`` or ``"auto"``.
    """
    if method == "direct":
        return xcorr_direct(x, y)
    if method == "fft":
        return xcorr_fft(x, y)
    if method != "auto":
        raise ValueError(f"unknown correlation method {method!r}")
    x = _samples(x)
    y = _samples(y)
    if len(x) * len(y) <= _DIRECT_WORK_LIMIT:
        return xcorr_direct(x, y)
    return xcorr_fft(x, y)


def acf(x, method="auto"):
    return xcorr_full(x, x, method)


def delay_correlation(x, ref, method="auto"):
    """Matched-filter output on the delay axis, ``sum_m x[m+d] conj(ref[m])``.

    Returned with ``zero_lag`` at delay 0; delays run ``-(len(ref)-1) .. len(x)-1``.
    """
    r = xcorr_full(x, ref, method)
    return Correlation(r.values[::-1].copy(), len(r) - 1 - r.zero_lag)


def chip_ccp(u, d, mainlobe_scale):
    """Peak cross-correlation magnitude of two chips divided by ``mainlobe_scale``."""
    if mainlobe_scale <= 0:
        raise ValueError("mainlobe_scale must be positive")
    return float(np.max(np.abs(xcorr_full(u, d).values)) / mainlobe_scale)


def to_db(ratio, floor=DB_FLOOR):
    """``20 log10(ratio)`` with zero mapped to ``floor``; works elementwise."""
    arr = np.asarray(ratio, dtype=float)
    if np.any(arr < 0):
        raise ValueError("dB conversion needs non-negative ratios")
    with np.errstate(divide="ignore"):
        out = np.where(arr > 0, 20 * np.log10(np.where(arr > 0, arr, 1.0)), floor)
    out = np.maximum(out, floor)
    if out.ndim == 0:
        return float(out)
    return out
