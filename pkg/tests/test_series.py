from fractions import Fraction

import pytest

from toricq.cohomology import CRClass, unit_class
from toricq.errors import (NontruncatingArgument, UnknownDirection,
                           ZeroZCoefficient)
from toricq.presentation import Character, Degree, SectorId, zero_degree
from toricq.series import (ExpPrefactorSpec, MultiSeries, NovikovDirection,
                           TruncationSpec, TVarDirection, ZLaurent,
                           apply_exp_prefactor, exp_divisor_flow,
                           invert_linear_factor, linear_factor)

F = Fraction

IDENT = SectorId((F(0), F(0)))
HALF = SectorId((F(1, 2), F(0)))
THETA = Character((2, 3))

UNIT = unit_class(2)
P = CRClass.from_poly(IDENT, {(1, 0): F(1)})
P2 = CRClass.from_poly(IDENT, {(2, 0): F(1)})
E = CRClass.from_poly(HALF, {(0, 0): F(1)})


def deg(a, b):
    return Degree((F(a), F(b)))


def key(a, b, m=()):
    return (deg(a, b), m)


def test_zlaurent_arithmetic(cubic):
    zl = ZLaurent({0: P, 1: UNIT})
    assert zl + zl.scale(-1) == ZLaurent()
    assert zl.shift(2).terms == {2: P, 3: UNIT}
    assert zl.plus() == zl and zl.minus().is_zero()
    low = ZLaurent({-1: E})
    assert (zl + low).minus() == low
    sq = zl.mul(zl, cubic.model)
    assert sq.terms == {0: P2, 1: P.scale(2), 2: UNIT}
    assert zl.clamp(1, None).terms == {1: UNIT}
    assert zl.coefficient(5).is_zero()
    with pytest.raises(TypeError):
        hash(zl)


def test_invert_linear_factor_exact(cubic):
    model = cubic.model
    divisor = {(1, 0): F(3)}
    inv = invert_linear_factor(model, IDENT, divisor, F(2))
    fac = linear_factor(model, IDENT, divisor, F(2))
    assert fac.mul(inv, model) == ZLaurent.from_class(UNIT)


def test_invert_linear_factor_expansion(cubic):
    inv = invert_linear_factor(cubic.model, IDENT, {(1, 0): F(1)}, F(1))
    assert inv.terms == {-1: UNIT, -2: P.scale(-1), -3: P2}


def test_invert_on_twisted_sector(cubic):
    # the divisor restricts to zero on the half sector, so 1/(D+z) = 1/z
    inv = invert_linear_factor(cubic.model, HALF, {(1, 0): F(1)}, F(1))
    assert inv.terms == {-1: E}


def test_zero_z_part_refused(cubic):
    with pytest.raises(ZeroZCoefficient):
        invert_linear_factor(cubic.model, IDENT, {(1, 0): F(1)}, F(0))


def test_truncation_spec():
    t = TruncationSpec(THETA, F(4), 1)
    assert t.degree_ok(deg(2, 0)) and not t.degree_ok(deg(F(5, 2), 0))
    assert t.key_ok(key(1, 0, (1,))) and not t.key_ok(key(1, 0, (2,)))
    other = TruncationSpec(THETA, F(6), 0, z_floor=-2)
    meet = t.intersect(other)
    assert meet.theta_bound == 4 and meet.t_bound == 0
    assert meet.z_floor == -2 and meet.z_ceil is None
    with pytest.raises(ValueError):
        t.intersect(TruncationSpec(Character((1, 0)), F(4)))


def test_multiseries_filters_on_build():
    t = TruncationSpec(THETA, F(2), 0, z_floor=-1)
    s = MultiSeries({
        key(0, 0): ZLaurent({0: UNIT}),
        key(1, 0): ZLaurent({-1: P, -2: P2}),
        key(4, 0): ZLaurent({0: UNIT}),
        key(0, 1): ZLaurent(),
    }, t)
    assert set(s.coeffs) == {key(0, 0), key(1, 0)}
    assert s.coefficient(key(1, 0)).terms == {-1: P}
    assert s.coefficient(key(4, 0)).is_zero()


def test_multiseries_algebra(cubic):
    t = TruncationSpec(THETA, F(4))
    a = MultiSeries({key(0, 0): ZLaurent({0: UNIT}),
                     key(1, 0): ZLaurent({-1: P})}, t)
    b = MultiSeries({key(1, 0): ZLaurent({-1: P})}, t)
    total = a + b
    assert total.coefficient(key(1, 0)).terms == {-1: P.scale(2)}
    assert (total - b) == a
    prod = a.mul(b, cubic.model)
    assert prod.coefficient(key(1, 0)).terms == {-1: P}
    assert prod.coefficient(key(2, 0)).terms == {-2: P2}
    assert a.shift_z(3).coefficient(key(1, 0)).terms == {2: P}


def test_truncation_split_identity():
    t = TruncationSpec(THETA, F(4))
    s = MultiSeries({key(0, 0): ZLaurent({2: UNIT, 0: P, -1: E}),
                     key(1, 1): ZLaurent({-3: P2, 1: UNIT})}, t)
    assert s.truncate_plus() + s.truncate_minus() == s
    assert s.truncate_plus().truncate_minus().is_zero()
    assert s.z_coefficient(-1) == {key(0, 0): E}


def test_differentiate_tvar():
    t = TruncationSpec(THETA, F(4), 2)
    s = MultiSeries({key(1, 0, (2,)): ZLaurent({0: P})}, t, 1)
    d = s.differentiate(TVarDirection("t0", 0))
    assert d.coefficient(key(1, 0, (1,))).terms == {0: P.scale(2)}
    assert d.differentiate(TVarDirection("t0", 0)) \
        .coefficient(key(1, 0, (0,))).terms == {0: P.scale(2)}


def test_differentiate_novikov():
    t = TruncationSpec(THETA, F(6))
    x = NovikovDirection("x", (F(0), F(1)), deg(F(-1, 2), 1))
    s = MultiSeries({key(F(-1), 2): ZLaurent({0: P})}, t)
    d = s.differentiate(x)
    assert d.coefficient(key(F(-1, 2), 1)).terms == {0: P.scale(2)}
    # the functional (1,0) takes value 1/2 on a generator-odd degree
    q_bad = NovikovDirection("bad", (F(1), F(0)), deg(F(1, 2), 0))
    odd = MultiSeries({key(F(1, 2), 0): ZLaurent({0: E})}, t)
    with pytest.raises(UnknownDirection):
        odd.differentiate(q_bad)
    with pytest.raises(UnknownDirection):
        odd.differentiate("x")


def test_scale_by_functional():
    t = TruncationSpec(THETA, F(6))
    s = MultiSeries({key(1, 0): ZLaurent({0: P}),
                     key(0, 1): ZLaurent({0: UNIT})}, t)
    scaled = s.scale_by_functional((F(2), F(0)))
    assert scaled.coefficient(key(1, 0)).terms == {0: P.scale(2)}
    assert scaled.coefficient(key(0, 1)).is_zero()


def test_prefactor_powers_at_degree_zero(cubic):
    t = TruncationSpec(THETA, F(0), 2)
    s = MultiSeries({key(0, 0, (0,)): ZLaurent({0: UNIT})}, t, 1)
    spec = ExpPrefactorSpec([(0, {(1, 0): F(1)})])
    r = apply_exp_prefactor(s, spec, cubic.model)
    assert r.coefficient(key(0, 0, (0,))).terms == {0: UNIT}
    assert r.coefficient(key(0, 0, (1,))).terms == {-1: P}
    assert r.coefficient(key(0, 0, (2,))).terms == {-2: P2.scale(F(1, 2))}


def test_prefactor_shifts_by_degree(cubic):
    # on a degree with first coordinate 1/2 the divisor p becomes p + z/2
    t = TruncationSpec(THETA, F(1), 1)
    s = MultiSeries({key(F(1, 2), 0, (0,)): ZLaurent({0: UNIT})}, t, 1)
    spec = ExpPrefactorSpec([(0, {(1, 0): F(1)})])
    r = apply_exp_prefactor(s, spec, cubic.model)
    got = r.coefficient(key(F(1, 2), 0, (1,)))
    assert got.terms == {-1: P, 0: UNIT.scale(F(1, 2))}


def test_prefactor_mixes_entries(cubic):
    t = TruncationSpec(THETA, F(0), 2)
    s = MultiSeries({key(0, 0, (0, 0)): ZLaurent({0: UNIT})}, t, 2)
    spec = ExpPrefactorSpec([(0, {(1, 0): F(1)}), (1, {(1, 0): F(2)})])
    r = apply_exp_prefactor(s, spec, cubic.model)
    # the cross term t0 t1 carries u0 u1 = 2 p^2
    assert r.coefficient(key(0, 0, (1, 1))).terms == {-2: P2.scale(2)}
    assert r.coefficient(key(0, 0, (0, 2))).terms == {-2: P2.scale(2)}
    assert r.coefficient(key(0, 0, (0, 1))).terms == {-1: P.scale(2)}


def test_flow_round_trip(cubic):
    t = TruncationSpec(THETA, F(4))
    s = MultiSeries({key(0, 0): ZLaurent({0: UNIT}),
                     key(F(1, 2), 1): ZLaurent({-1: P, 0: E})}, t)
    flow = MultiSeries({key(F(1, 2), 1): ZLaurent({0: UNIT.scale(F(3))})}, t)
    pushed = exp_divisor_flow(s, flow, 1, cubic.model)
    assert pushed.coefficient(key(F(1, 2), 1)).terms \
        == {-1: P + UNIT.scale(3), 0: E}
    back = exp_divisor_flow(pushed, flow, -1, cubic.model)
    assert back == s


def test_flow_argument_validation(cubic):
    t = TruncationSpec(THETA, F(4))
    s = MultiSeries({key(0, 0): ZLaurent({0: UNIT})}, t)
    constant = MultiSeries({key(0, 0): ZLaurent({0: UNIT})}, t)
    with pytest.raises(NontruncatingArgument):
        exp_divisor_flow(s, constant, 1, cubic.model)
    not_scalar = MultiSeries({key(1, 0): ZLaurent({0: P})}, t)
    with pytest.raises(NontruncatingArgument):
        exp_divisor_flow(s, not_scalar, 1, cubic.model)
