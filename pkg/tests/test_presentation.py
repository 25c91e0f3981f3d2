from fractions import Fraction

import pytest

from toricq.errors import (EmptySemistableLocus, GeneratorNotPositive,
                           InfiniteStabilizer, RankDeficient)
from toricq.presentation import (Character, Degree, GitPresentation,
                                 degree_pairing, enumerate_effective,
                                 enumerate_sectors, sector_from_degree,
                                 semistable_supports, support_profile,
                                 validate_presentation)

F = Fraction


def deg(*coords):
    return Degree(tuple(F(c) for c in coords))


def cubic_presentation():
    return GitPresentation(
        rho=[Character((1, 0)), Character((1, 0)), Character((1, 0)),
             Character((2, 1)), Character((0, 1))],
        theta=Character((2, 3)),
        tau=[Character((3, 1))])


# generators of the effective cone for the cubic presentation
B1 = deg(F(1, 2), 0)
B2 = deg(F(-1, 2), 1)


def cubic_degree(l, k):
    return B1.scale(l) + B2.scale(k)


def test_cubic_supports_and_exponent():
    report = validate_presentation(cubic_presentation())
    assert report.supports == [frozenset({0, 4}), frozenset({1, 4}),
                               frozenset({2, 4}), frozenset({3, 4})]
    orders = {tuple(sorted(st.support)): st.order
              for st in report.stabilizers}
    assert orders == {(0, 4): 1, (1, 4): 1, (2, 4): 1, (3, 4): 2}
    assert report.exponent == 2


def test_cubic_sector_list():
    sectors = enumerate_sectors(cubic_presentation())
    assert [s.coords for s in sectors] == [(0, 0), (F(1, 2), 0)]
    assert sectors[0].is_identity()
    assert sectors[1].order() == 2
    assert sectors[1].inverse() == sectors[1]
    assert str(sectors[1]) == "1/2,0"


def test_rank_deficient_weights():
    p = GitPresentation([Character((1, 0)), Character((2, 0))],
                        Character((1, 0)), [])
    with pytest.raises(RankDeficient):
        validate_presentation(p)


def test_zero_theta_rejected():
    p = GitPresentation([Character((1,)), Character((1,))],
                        Character((0,)), [])
    with pytest.raises(EmptySemistableLocus):
        validate_presentation(p)


def test_theta_outside_cone():
    p = GitPresentation([Character((1,)), Character((2,))],
                        Character((-1,)), [])
    with pytest.raises(EmptySemistableLocus):
        validate_presentation(p)


def test_positive_dimensional_stabilizer():
    # both weights on one ray of a rank 2 torus: needs a third to span,
    # but theta on the shared ray keeps the degenerate support minimal
    p = GitPresentation([Character((1, 0)), Character((1, 0)),
                         Character((0, 1)), Character((0, -1))],
                        Character((1, 0)), [])
    with pytest.raises(InfiniteStabilizer):
        validate_presentation(p)


def test_sector_from_degree_parity():
    p = cubic_presentation()
    for l in range(4):
        for k in range(4):
            s = sector_from_degree(p, cubic_degree(l, k))
            if (l - k) % 2:
                assert s.coords == (F(1, 2), 0)
            else:
                assert s.is_identity()


def test_degree_pairings():
    p = cubic_presentation()
    beta = cubic_degree(3, 1)
    assert degree_pairing(beta, p.theta) == 5
    assert [degree_pairing(beta, ch) for ch in p.rho] == [1, 1, 1, 3, 1]
    assert degree_pairing(beta, p.tau[0]) == 4


def test_support_profile_classes():
    p = cubic_presentation()
    cases = {
        (1, 1): "nonneg-integral",
        (0, 2): "negative-integral",
        (1, 0): "nonintegral-nonneg",
        (0, 1): "negative-fractional",
    }
    for (l, k), want in cases.items():
        prof = support_profile(p, cubic_degree(l, k))
        assert prof.tau_classes == (want,)
        assert prof.zss_nonempty


def test_effective_enumeration_order():
    p = cubic_presentation()
    got = enumerate_effective(p, [B1, B2], F(3))
    want = [cubic_degree(l, k) for l, k in
            [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0)]]
    assert got == want


def test_effective_monotone_in_bound():
    p = cubic_presentation()
    small = enumerate_effective(p, [B1, B2], F(4))
    large = enumerate_effective(p, [B1, B2], F(6))
    assert set(small) <= set(large)
    assert all(degree_pairing(b, p.theta) <= 4 for b in small)


def test_nonpositive_generator_rejected():
    p = cubic_presentation()
    with pytest.raises(GeneratorNotPositive):
        enumerate_effective(p, [deg(F(1, 2), -1)], F(3))


def test_dead_support_degrees_dropped():
    # weights 1 and 2 on a rank 1 torus; a degree pairing fractionally
    # with both weights has no semistable fixed locus and is skipped
    p = GitPresentation([Character((1,)), Character((2,))],
                        Character((1,)), [])
    quarter = deg(F(1, 4))
    kept = enumerate_effective(p, [quarter], F(1))
    assert kept == [deg(0), deg(F(1, 2)), deg(1)]
    everything = enumerate_effective(p, [quarter], F(1),
                                     require_support=False)
    assert everything == [deg(0), quarter, deg(F(1, 2)), deg(F(3, 4)),
                          deg(1)]
    assert not support_profile(p, quarter).zss_nonempty


def test_supports_need_theta():
    p = GitPresentation([Character((1,)), Character((2,))],
                        Character((0,)), [])
    assert semistable_supports(p) == []
