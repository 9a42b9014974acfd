import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dfcw_golay.chips import (
    AliasingWarning,
    ChipSpec,
    FadingProfile,
    Family,
    apply_fading,
    default_fading_boundary,
    fading_mask,
    hop_mirror_check,
    hop_sequence,
    mirror,
    round_half_away,
    slope_values,
    synthesize,
    synthesize_hops,
)
from dfcw_golay.correlate import acf


@pytest.mark.parametrize(
    "family, n, slope, expected",
    [
        (Family.DF_LFM, 4, None, [0, 1, 2, 3]),
        (Family.DF_PLFM_UP_UP, 8, 0.25, [0, 0, 1, 1, 3, 4, 6, 7]),
        (Family.DF_PLFM_UP_DOWN, 8, 0.5, [0, 1, 2, 3, 7, 6, 5, 4]),
    ],
)
def test_hop_sequence_examples(family, n, slope, expected):
    assert hop_sequence(ChipSpec(family, n, slope)).tolist() == expected


@pytest.mark.parametrize("n", [2, 3, 8, 16, 33])
def test_canonical_lfm_hops_are_ramp(n):
    assert hop_sequence(ChipSpec(Family.DF_LFM, n)).tolist() == list(range(n))


@pytest.mark.parametrize("family", [Family.DF_PLFM_UP_UP, Family.DF_PLFM_UP_DOWN])
@pytest.mark.parametrize("slope", [0.1, 0.24, 0.5, 0.9])
def test_plfm_hops_span_full_band(family, slope):
    hops = hop_sequence(ChipSpec(family, 16, slope))
    assert hops.min() == 0 and hops.max() == 15


def test_round_half_away():
    assert [round_half_away(v) for v in (0.5, 1.5, 2.5, -0.5, -1.5, 0.49)] == [1, 2, 3, -1, -2, 0]


def test_synthesize_small_example():
    u = synthesize(ChipSpec(Family.DF_LFM, 2, samples_per_subpulse=2)).samples
    assert np.allclose(u, [1, 1, 1, -1], atol=1e-15)


@pytest.mark.parametrize("family", list(Family))
def test_synthesize_starts_at_one_and_unit_magnitude(family):
    u = synthesize(ChipSpec(family, 8, 0.3, samples_per_subpulse=16)).samples
    assert u[0] == 1
    assert np.allclose(np.abs(u), 1)
    assert len(u) == 8 * 16


def test_constant_hops_give_ones():
    assert np.allclose(synthesize_hops([0, 0, 0], 4).samples, np.ones(12))


def test_aliasing_warning():
    with pytest.warns(AliasingWarning):
        synthesize(ChipSpec(Family.DF_LFM, 16, samples_per_subpulse=8))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        synthesize(ChipSpec(Family.DF_LFM, 16, samples_per_subpulse=32))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"family": Family.DF_PLFM_UP_UP, "num_subpulses": 7},
        {"num_subpulses": 0},
        {"slope": 0.0},
        {"slope": 1.5},
        {"mirror_sign": 2},
        {"samples_per_subpulse": 0},
    ],
)
def test_chip_spec_validation(kwargs):
    with pytest.raises(ValueError):
        ChipSpec(**kwargs)


def test_family_parse():
    assert Family.parse("DF_PLFM_UP_UP") is Family.DF_PLFM_UP_UP
    assert Family.parse("df-lfm") is Family.DF_LFM
    with pytest.raises(ValueError):
        Family.parse("triangular")


def test_mirror_examples():
    assert np.array_equal(mirror(np.array([1, 1, 1, -1])), [-1, 1, 1, 1])
    assert np.allclose(mirror(np.array([1, 1j]), -1), [1j, -1])
    with pytest.raises(ValueError):
        mirror(np.array([1]), 0)


@pytest.mark.parametrize(
    "spec",
    [
        ChipSpec(Family.DF_PLFM_UP_UP, 8, 0.25),
        ChipSpec(Family.DF_LFM, 4),
        ChipSpec(Family.DF_PLFM_UP_DOWN, 8, 0.5),
    ],
)
def test_formula_mirror_hops_match_reversal(spec):
    check = hop_mirror_check(spec)
    assert check.hops_match
    assert check.aligned_deviation < 1e-12


def test_constant_hop_chip_is_palindrome():
    hops = np.zeros(6, dtype=int)
    assert np.array_equal(hops[::-1], hops)


@given(
    hops=st.lists(st.integers(0, 15), min_size=1, max_size=12),
    ns=st.integers(1, 16),
    sign=st.sampled_from([1, -1]),
)
@settings(max_examples=60, deadline=None)
def test_mirror_acf_identity_any_hops(hops, ns, sign):
    u = synthesize_hops(hops, ns).samples
    d = mirror(u, sign)
    diff = np.abs(acf(d, "direct").values - acf(u, "direct").values)
    assert diff.max() <= 1e-12


@pytest.mark.parametrize(
    "family, count, k, expected",
    [
        (Family.DF_PLFM_UP_UP, 2, 0.25, [0.25, 0.75]),
        (Family.DF_LFM, 3, 0.1, [0.1, 0.45, 0.8]),
    ],
)
def test_slope_values_examples(family, count, k, expected):
    assert np.allclose(slope_values(family, count, k), expected)


def test_slope_values_degenerate_warns():
    with pytest.warns(UserWarning):
        values = slope_values(Family.DF_PLFM_UP_DOWN, 2, 0.5)
    assert values == [0.5, 0.5]


def test_slope_values_rejects_bad_k():
    with pytest.raises(ValueError):
        slope_values(Family.DF_LFM, 3, 0.0)


def test_fading_unit_alphas_is_identity():
    spec = ChipSpec(Family.DF_LFM, 16, samples_per_subpulse=32)
    faded = apply_fading(spec, FadingProfile(1.0, 1.0, 12))
    assert np.array_equal(faded.samples, synthesize(spec).samples)


def test_faded_forward_and_mirror_acfs_identical():
    spec = ChipSpec(Family.DF_LFM, 16, samples_per_subpulse=32)
    prof = FadingProfile(0.9792, 0.8470, 12)
    ru = acf(apply_fading(spec, prof).samples)
    rd = acf(apply_fading(spec, prof, is_mirror=True).samples)
    clean = acf(synthesize(spec).samples)
    assert np.max(np.abs(ru.values - rd.values)) <= 1e-9
    assert abs(ru.values[ru.zero_lag]) < abs(clean.values[clean.zero_lag])


def test_fading_mask_layout():
    mask = fading_mask(4, 2, FadingProfile(0.5, 1.0, 3))
    assert mask.tolist() == [0.5] * 6 + [1.0] * 2
    assert fading_mask(4, 2, FadingProfile(0.5, 1.0, 3), is_mirror=True).tolist() == [1.0] * 2 + [0.5] * 6


@pytest.mark.parametrize("text", ["0.5,1.0", "0,1,2", "0.5,1.2,2", "0.5,0.5,0"])
def test_fading_profile_parse_rejects(text):
    with pytest.raises(ValueError):
        FadingProfile.parse(text)


def test_fading_boundary_beyond_chip():
    with pytest.raises(ValueError):
        fading_mask(4, 2, FadingProfile(0.5, 1.0, 5))


def test_default_fading_boundary():
    assert default_fading_boundary(Family.DF_LFM, 16) == 12
    assert default_fading_boundary(Family.DF_PLFM_UP_UP, 16) == 8
