import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dfcw_golay.chips import ChipSpec, Family, mirror, synthesize
from dfcw_golay.correlate import (
    DB_FLOOR,
    acf,
    chip_ccp,
    delay_correlation,
    next_pow2,
    to_db,
    xcorr_direct,
    xcorr_fft,
    xcorr_full,
)


def loop_xcorr(x, y):
    """R[k] = sum_m x[m] conj(y[m+k]), lags -(P-1)..Q-1, by plain loops."""
    p, q = len(x), len(y)
    return np.array(
        [sum(x[m] * np.conj(y[m + k]) for m in range(p) if 0 <= m + k < q) for k in range(-(p - 1), q)],
        dtype=complex,
    )


def test_real_acf_example():
    r = xcorr_full([1, 1], [1, 1])
    assert np.allclose(r.values, [1, 2, 1])
    assert r.zero_lag == 1


def test_complex_acf_example():
    r = acf([1, 1j])
    assert r.values[r.zero_lag] == 2
    assert np.isclose(r.lag(1), -1j)
    assert np.isclose(r.lag(-1), 1j)


complex_lists = st.lists(
    st.tuples(st.floats(-3, 3), st.floats(-3, 3)).map(lambda t: complex(*t)), min_size=1, max_size=20
)


@given(complex_lists, complex_lists)
@settings(max_examples=80, deadline=None)
def test_direct_matches_loop(x, y):
    assert np.allclose(xcorr_direct(x, y).values, loop_xcorr(x, y), atol=1e-12)


@given(complex_lists, complex_lists)
@settings(max_examples=80, deadline=None)
def test_fft_matches_direct(x, y):
    d = xcorr_direct(x, y).values
    f = xcorr_fft(x, y).values
    scale = max(np.abs(d).max(), 1e-300)
    assert np.abs(f - d).max() <= 1e-9 * max(scale, 1.0)


def test_auto_selects_paths_consistently():
    rng = np.random.default_rng(1)
    x = rng.standard_normal(700) + 1j * rng.standard_normal(700)
    y = rng.standard_normal(300) + 1j * rng.standard_normal(300)
    a = xcorr_full(x, y, "auto").values
    d = xcorr_full(x, y, "direct").values
    assert np.abs(a - d).max() <= 1e-9 * np.abs(d).max()


def test_unknown_method_and_empty_input():
    with pytest.raises(ValueError):
        xcorr_full([1], [1], "magic")
    with pytest.raises(ValueError):
        xcorr_full([], [1])


def test_acf_hermitian_symmetry():
    rng = np.random.default_rng(2)
    x = rng.standard_normal(33) + 1j * rng.standard_normal(33)
    r = acf(x).values
    assert np.allclose(r, np.conj(r[::-1]))


def test_delay_correlation_peaks_at_true_delay():
    rng = np.random.default_rng(3)
    ref = np.exp(2j * np.pi * rng.random(40))
    x = np.concatenate([np.zeros(17), ref, np.zeros(5)])
    r = delay_correlation(x, ref)
    assert int(np.argmax(np.abs(r.values))) - r.zero_lag == 17


def test_chip_ccp_sinusoid_is_one():
    ones = np.ones(16)
    assert chip_ccp(ones, ones, 16) == pytest.approx(1.0)


def test_chip_ccp_lfm_mirror_small_at_eight_samples():
    # hops reach 14 >= Ns = 8 here, so the chip aliases
    spec = ChipSpec(Family.DF_LFM, 32, 0.24, samples_per_subpulse=8)
    u = synthesize(spec).samples
    assert chip_ccp(u, mirror(u), len(u)) < 0.2


@pytest.mark.parametrize("ns", [16, 32, 64])
def test_chip_ccp_lfm_mirror_small_alias_free(ns):
    spec = ChipSpec(Family.DF_LFM, 32, 0.24, samples_per_subpulse=ns)
    u = synthesize(spec).samples
    assert chip_ccp(u, mirror(u), len(u)) < 0.2


def test_chip_ccp_shifted_delta():
    u = np.array([1, 0, 0, 0])
    d = np.array([0, 1, 0, 0])
    assert chip_ccp(u, d, 4) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        chip_ccp(u, d, 0)


def test_to_db_examples():
    assert to_db(1.0) == 0.0
    assert to_db(0.1) == pytest.approx(-20.0)
    assert to_db(0.0) == DB_FLOOR
    assert np.allclose(to_db(np.array([1.0, 0.0])), [0.0, DB_FLOOR])
    with pytest.raises(ValueError):
        to_db(-1.0)


def test_next_pow2():
    assert [next_pow2(n) for n in (1, 2, 3, 5, 64, 65)] == [1, 2, 4, 8, 64, 128]
