import json

import numpy as np
import pytest

from dfcw_golay.chips import ChipSpec, Family, mirror, slope_values
from dfcw_golay.code_builder import build_base_code, build_code
from dfcw_golay.code_sets import (
    MATE,
    PAIR,
    QUOTED_TABLE1,
    best_candidate_set,
    build_set,
    combined_set,
    mate_set,
    pair_mate_xcorr,
    set_metrics,
    table1,
)
from dfcw_golay.golay import generate_golay_pair, mate_pair


def test_singleton_set_is_base_code():
    s = build_set(Family.DF_LFM, 4, 8, 1, 0.3, 16)
    base = build_base_code(ChipSpec(Family.DF_LFM, 8, 0.3, 1, 16), 2)
    assert len(s) == 1
    assert np.array_equal(s.codes[0].samples, base.samples)


@pytest.mark.parametrize("family", [Family.DF_PLFM_UP_UP, Family.DF_PLFM_UP_DOWN])
def test_plfm_members_share_bandwidth(family):
    s = build_set(family, 4, 16, 4, 0.24, 32)
    for m in s.members:
        assert min(m.hops) == 0 and max(m.hops) == 15


def test_lfm_members_increase_bandwidth():
    s = build_set(Family.DF_LFM, 4, 16, 4, 0.1, 32)
    maxima = [max(m.hops) for m in s.members]
    assert all(x < y for x, y in zip(maxima, maxima[1:]))


def test_mate_set_singleton():
    pair = build_set(Family.DF_LFM, 4, 8, 1, 0.3, 16)
    mates = mate_set(pair)
    a, b = generate_golay_pair(2)
    ma, _ = mate_pair(a, b)
    assert len(mates) == 1 and mates.members[0].kind == MATE
    assert np.array_equal(mates.codes[0].a_code, ma)


def test_mate_set_rejects_mates():
    pair = build_set(Family.DF_LFM, 4, 8, 2, 0.3, 16)
    with pytest.raises(ValueError):
        mate_set(mate_set(pair))


def _pair_and_mate_codes(chip_family=Family.DF_LFM, n=8, n_g_exp=4, ns=16, sinusoid=False):
    a, b = generate_golay_pair(n_g_exp)
    ma, mb = mate_pair(a, b)
    if sinusoid:
        u = np.ones(n * ns, dtype=complex)
    else:
        from dfcw_golay.chips import synthesize

        u = synthesize(ChipSpec(chip_family, n, None, 1, ns)).samples
    d = mirror(u)
    return build_code(a, b, u, d), build_code(ma, mb, u, d)


def _middle_peak(report):
    return max(report.zero_region_peak, report.mainlobe_peak)


def test_pair_mate_xcorr_middle_regions_vanish():
    s1, s2 = _pair_and_mate_codes()
    _, rep = pair_mate_xcorr(s1, s2)
    assert _middle_peak(rep) <= 1e-9
    assert not rep.has_mainlobe
    assert 0 < rep.cross_region_peak < 0.2


def test_pair_mate_xcorr_sinusoid_chips():
    s1, s2 = _pair_and_mate_codes(sinusoid=True)
    _, rep = pair_mate_xcorr(s1, s2)
    assert _middle_peak(rep) <= 1e-9
    assert rep.cross_region_peak > 0.2


def test_pair_mate_xcorr_self_has_mainlobe():
    s1, _ = _pair_and_mate_codes()
    _, rep = pair_mate_xcorr(s1, s1)
    assert rep.has_mainlobe
    assert rep.mainlobe_peak == pytest.approx(1.0)


def test_combined_set_size_and_provenance():
    pair = build_set(Family.DF_LFM, 4, 8, 4, 0.2, 16)
    comb = combined_set(pair, mate_set(pair))
    assert len(comb) == 8
    assert [m.kind for m in comb.members] == [PAIR] * 4 + [MATE] * 4


def test_combined_set_rejects_mismatched_params():
    p1 = build_set(Family.DF_LFM, 4, 8, 2, 0.2, 16)
    p2 = build_set(Family.DF_LFM, 4, 8, 2, 0.2, 32)
    with pytest.raises(ValueError):
        combined_set(p1, mate_set(p2))


def test_best_candidate_interleaves_kinds_and_slopes():
    best = best_candidate_set(Family.DF_LFM, 4, 8, 4, 0.1, 16)
    grid = slope_values(Family.DF_LFM, 8, 0.1)
    assert [m.kind for m in best.members] == [PAIR, MATE, PAIR, MATE]
    assert np.allclose([m.gamma for m in best.members], grid[::2])


def test_best_candidate_smallest_instance():
    best = best_candidate_set(Family.DF_PLFM_UP_UP, 4, 8, 2, 0.1, 16)
    assert [m.kind for m in best.members] == [PAIR, MATE]
    assert best.members[0].gamma == pytest.approx(0.1)
    with pytest.raises(ValueError):
        best_candidate_set(Family.DF_LFM, 4, 8, 1, 0.1, 16)


def test_identical_members_give_unit_mccp():
    code = build_set(Family.DF_LFM, 4, 8, 1, 0.3, 16).codes[0]
    metrics = set_metrics([code, code])
    assert metrics.mccp == pytest.approx(1.0)
    assert metrics.mccp_db == pytest.approx(0.0, abs=1e-9)


def test_set_metrics_need_two_members():
    s = build_set(Family.DF_LFM, 4, 8, 1, 0.3, 16)
    with pytest.raises(ValueError):
        set_metrics(s)


def test_set_metrics_pairs_and_accp():
    s = build_set(Family.DF_PLFM_UP_DOWN, 4, 8, 3, 0.2, 16)
    m = set_metrics(s)
    assert len(m.pair_peaks) == 3
    values = [v for _, v in m.pair_peaks]
    assert m.mccp == max(values)
    assert m.accp == pytest.approx(np.mean(values))
    assert len(m.asp) == 3


def test_pairwise_peak_matches_direct_correlation():
    from dfcw_golay.correlate import xcorr_direct

    s = build_set(Family.DF_LFM, 2, 4, 2, 0.2, 8)
    c0, c1 = s.codes
    direct = np.abs(xcorr_direct(c0.samples, c1.samples).values).max() / (2 * c0.n_g * c0.chip_len)
    assert set_metrics(s).mccp == pytest.approx(direct, rel=1e-9)


def test_manifest_is_json_serializable():
    s = build_set(Family.DF_LFM, 4, 8, 2, 0.2, 16)
    doc = json.loads(json.dumps(s.manifest()))
    assert doc["size"] == 2
    assert doc["shared"]["n_g"] == 4
    assert doc["members"][1]["kind"] == PAIR


def test_table1_rows_mark_quoted_values():
    rows, metrics = table1(n_g=4, n=8, count=3, ns=16)
    assert [r[3] for r in rows[:3]] == ["quoted"] * 3
    assert rows[-1][3] == "computed"
    assert rows[0][1:3] == QUOTED_TABLE1[0][1:3]
    assert rows[-1][1] == pytest.approx(metrics.avg_acf_peak_db)
