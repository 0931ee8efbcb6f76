import itertools

import pytest

from tilebench.islands import (
    Schedule,
    changed_fraction_bound,
    chebyshev,
    clean,
    correction_gap_ok,
    diameter,
    find_islands,
    make_schedule,
    sample_bernoulli,
    schedule_growth_ok,
    survival_log2_bound,
)


def test_chebyshev_plane_and_torus():
    assert chebyshev((0, 0), (3, -4)) == 4
    assert chebyshev((0, 0), (511, 0), torus=(512, 512)) == 1
    assert chebyshev((0, 0), (256, 256), torus=(512, 512)) == 256


def test_diameter():
    assert diameter([]) == 0
    assert diameter([(5, 5)]) == 0
    assert diameter([(0, 0), (2, 1), (0, 3)]) == 3
    assert diameter([(0, 0), (7, 0)], torus=(8, 8)) == 1


def test_find_islands_basic():
    islands, oversize = find_islands({(0, 0), (1, 1), (9, 9)}, 1, 2)
    assert islands == [frozenset({(0, 0), (1, 1)}), frozenset({(9, 9)})]
    assert oversize == []


def test_find_islands_oversize_group():
    # the two points chain within beta but span more than alpha
    islands, oversize = find_islands({(0, 0), (2, 0)}, 1, 2)
    assert islands == []
    assert oversize == [frozenset({(0, 0), (2, 0)})]


def test_find_islands_separation_boundary():
    # distance 3 > beta=2: the groups are separate islands
    islands, _ = find_islands({(0, 0), (3, 0)}, 1, 2)
    assert len(islands) == 2


def test_find_islands_torus_wraps():
    islands, _ = find_islands({(0, 0), (7, 7)}, 1, 2, torus=(8, 8))
    assert islands == [frozenset({(0, 0), (7, 7)})]


def test_find_islands_rejects_bad_scales():
    with pytest.raises(ValueError):
        find_islands(set(), 3, 2)


def brute_force_islands(points, alpha, beta, torus=None):
    """Independent oracle: test every subset against the island definition."""
    pts = sorted(points)
    islands = []
    for r in range(1, len(pts) + 1):
        for sub in itertools.combinations(pts, r):
            rest = [p for p in pts if p not in sub]
            if diameter(sub, torus) > alpha:
                continue
            if any(chebyshev(p, q, torus) <= beta for p in sub for q in rest):
                continue
            islands.append(frozenset(sub))
    return sorted(islands, key=min)


def test_islands_match_brute_force_small():
    grid = [(x, y) for x in range(4) for y in range(4)]
    for r in range(3):
        for sub in itertools.combinations(grid, r):
            for alpha, beta in [(1, 1), (1, 2), (2, 3)]:
                fast, _ = find_islands(sub, alpha, beta)
                assert fast == brute_force_islands(sub, alpha, beta), (sub, alpha, beta)


def test_make_schedule_frozen_values():
    s = make_schedule(2, 1, 3)
    assert s.alphas == (1, 17, 561)
    assert s.betas == (2, 68, 3366)
    assert schedule_growth_ok(s) == [True, True, True]


def test_schedule_json_roundtrip():
    s = make_schedule(2, 1, 3)
    again = Schedule.loads(s.dumps())
    assert again == s


def test_correction_gap_frozen():
    s = make_schedule(2, 1, 3)
    # beta_k / alpha_k = 2k: the 4*c2 gap needs c*k > 4*c2
    assert correction_gap_ok(s, 1) == [False, False, True]
    s13 = make_schedule(13, 1, 2)
    assert correction_gap_ok(s13, 3) == [True, True]


def test_changed_fraction_bound_frozen():
    s = make_schedule(2, 1, 3)
    # (9*1/2)^2 + (9*17/68)^2 + (9*561/3366)^2 = 20.25 + 5.0625 + 2.25
    assert changed_fraction_bound(s, 2) == pytest.approx(27.5625)


def test_survival_log2_bound_frozen():
    s = make_schedule(2, 1, 3)
    # 2*log2(2^-10) + 2*log2(8) = -20 + 6
    assert survival_log2_bound(s, 1, 2**-10) == pytest.approx(-14.0)
    # decay across ranks needs epsilon small enough to beat the tree-count term
    assert (
        survival_log2_bound(s, 3, 2**-20)
        < survival_log2_bound(s, 2, 2**-20)
        < survival_log2_bound(s, 1, 2**-20)
        < 0
    )
    with pytest.raises(ValueError):
        survival_log2_bound(s, 4, 0.5)


def test_clean_two_ranks():
    s = make_schedule(2, 1, 3)
    rep = clean({(0, 0), (2, 0)}, s)
    assert rep.success
    assert rep.ranks[0].removed == 0
    assert len(rep.ranks[0].oversize) == 1
    assert rep.ranks[1].removed == 2


def test_clean_failure_reports_residual():
    s = make_schedule(2, 1, 1)
    rep = clean({(0, 0), (2, 0)}, s)
    assert not rep.success
    assert rep.residual == frozenset({(0, 0), (2, 0)})


def test_clean_empty_is_trivially_successful():
    rep = clean(set(), make_schedule(2, 1, 2))
    assert rep.success and rep.residual == frozenset()


def test_sample_bernoulli_deterministic_and_calibrated():
    a = sample_bernoulli(128, 128, 0.01, seed=[5, 0])
    b = sample_bernoulli(128, 128, 0.01, seed=[5, 0])
    assert a == b
    # 16384 cells at 1%: mean 163.8, sd ~12.7; stay within 5 sd
    assert 100 <= len(a) <= 230
    assert all(0 <= x < 128 and 0 <= y < 128 for x, y in a)
    assert sample_bernoulli(16, 16, 0.0, seed=1) == set()
