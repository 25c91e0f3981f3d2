import json
from fractions import Fraction

import pytest

from conftest import config_path
from toricq.cohomology import CRClass, unit_class
from toricq.config import load_config_data
from toricq.errors import (FrameResidualTooLow, NotUnital,
                           PositivePowersRemain, UnknownDirection,
                           ValidationError)
from toricq.ifunction import IFunctionEngine
from toricq.mirror import (DivisorDirection, JFrame, ProductEntry,
                           UnitDirection, auto_flow, mirror_map,
                           normalize_frame, plus_check, product_table,
                           quantum_product)
from toricq.presentation import Character, Degree, SectorId
from toricq.series import MultiSeries, ZLaurent, exp_divisor_flow

F = Fraction

IDENT = SectorId((F(0), F(0)))
HALF = SectorId((F(1, 2), F(0)))

UNIT = unit_class(2)
P = CRClass.from_poly(IDENT, {(1, 0): F(1)})
P2 = CRClass.from_poly(IDENT, {(2, 0): F(1)})
E = CRClass.from_poly(HALF, {(0, 0): F(1)})


def cubic_degree(l, k):
    return Degree((F(l - k, 2), F(k)))


def dkey(l, k):
    return (cubic_degree(l, k), ())


@pytest.fixture(scope="module")
def big_i(cubic):
    engine = IFunctionEngine(cubic.presentation, cubic.model,
                             cubic.provider, cubic.generators)
    return engine.big_I(cubic.trunc)


@pytest.fixture(scope="module")
def frame(cubic, big_i):
    mm = mirror_map(big_i, cubic.model)
    flow = auto_flow(mm, cubic.model)
    return normalize_frame(big_i, flow, cubic.model,
                           cubic.frame_directions())


def x_direction(cubic):
    return cubic.directions()["x"]


def test_mirror_map_exact(cubic, big_i):
    mm = mirror_map(big_i, cubic.model)
    assert mm.mu.coeffs == {
        dkey(0, 1): ZLaurent({0: E}),
        dkey(1, 1): ZLaurent({0: UNIT}),
        dkey(0, 3): ZLaurent({0: E.scale(F(1, 24))}),
    }
    assert mm.piece(dkey(2, 0)).is_zero()


def test_mirror_map_needs_unit(cubic):
    bad = MultiSeries({dkey(0, 0): ZLaurent({0: P})}, cubic.trunc)
    with pytest.raises(NotUnital):
        mirror_map(bad, cubic.model)
    with pytest.raises(NotUnital):
        mirror_map(MultiSeries.zero(cubic.trunc), cubic.model)


def test_plus_check_definitional(cubic, big_i):
    mm = mirror_map(big_i, cubic.model)
    report = plus_check(big_i, mm, cubic.model)
    assert report.ok
    assert (cubic_degree(0, 0), ()) in [e.key for e in report.entries]


def test_plus_check_flags_corruption(cubic, big_i):
    mm = mirror_map(big_i, cubic.model)
    tampered = dict(mm.mu.coeffs)
    tampered[dkey(0, 1)] = ZLaurent({0: E.scale(2)})
    bad = mirror_map(big_i, cubic.model)
    bad.mu = MultiSeries(tampered, mm.mu.trunc, mm.mu.tvars)
    report = plus_check(big_i, bad, cubic.model)
    assert not report.ok
    flagged = [e.key for e in report.entries if not e.ok]
    assert flagged == [dkey(0, 1)]


def test_auto_flow_is_scalar_part(cubic, big_i):
    mm = mirror_map(big_i, cubic.model)
    flow = auto_flow(mm, cubic.model)
    assert flow.coeffs == {dkey(1, 1): ZLaurent({0: UNIT})}


def test_frame_shape(cubic, frame):
    assert frame.residual_order == 3
    assert frame.tau == {dkey(0, 1): E}
    assert frame.series.coefficient(frame.series.zero_key()) \
        == ZLaurent.from_class(UNIT)
    # the flowed series stays on the cone: no z-positive parts anywhere
    for key, val in frame.z_frame().coeffs.items():
        top = max(val.terms)
        assert top <= (1 if key == frame.series.zero_key() else 0)


def test_zero_flow_leaves_positive_powers(cubic, big_i):
    zero_flow = MultiSeries.zero(cubic.trunc)
    with pytest.raises(PositivePowersRemain):
        normalize_frame(big_i, zero_flow, cubic.model,
                        cubic.frame_directions())


def test_stray_high_power_detected(cubic, big_i):
    noisy = big_i + MultiSeries(
        {dkey(2, 0): ZLaurent({2: P})}, cubic.trunc)
    mm = mirror_map(noisy, cubic.model)
    flow = auto_flow(mm, cubic.model)
    with pytest.raises(PositivePowersRemain):
        normalize_frame(noisy, flow, cubic.model,
                        cubic.frame_directions())


def test_reflow_recovers_series(cubic, big_i, frame):
    back = exp_divisor_flow(frame.series, frame.flow, 1, cubic.model)
    assert back == big_i


def test_product_x_x(cubic, frame):
    x = x_direction(cubic)
    got = quantum_product(frame, x, x, {"x": 0})
    assert got == {cubic_degree(0, 0): P2.scale(F(1, 3)),
                   cubic_degree(1, 0): E.scale(F(-3, 2))}
    paired = {beta: cubic.model.orb_pairing(cl, E)
              for beta, cl in got.items()}
    assert paired == {cubic_degree(0, 0): 0,
                      cubic_degree(1, 0): F(-3, 4)}


def test_product_symmetry_with_divisor(cubic, frame):
    x = x_direction(cubic)
    p_dir = DivisorDirection("p", Character((1, 0)))
    ab = quantum_product(frame, p_dir, x, {"x": 0})
    ba = quantum_product(frame, x, p_dir, {"x": 0})
    assert ab == ba
    assert ab == {cubic_degree(1, 0): P.scale(F(1, 2))}


def test_divisor_squared(cubic, frame):
    p_dir = DivisorDirection("p", Character((1, 0)))
    got = quantum_product(frame, p_dir, p_dir, {"x": 0})
    assert got == {cubic_degree(0, 0): P2,
                   cubic_degree(1, 0): E.scale(F(3, 2)),
                   cubic_degree(2, 0): UNIT.scale(3)}


def test_unit_direction_products(cubic, frame):
    one = UnitDirection()
    x = x_direction(cubic)
    assert quantum_product(frame, one, one) \
        == {cubic_degree(0, 0): UNIT}
    assert quantum_product(frame, one, x, {"x": 0}) \
        == {cubic_degree(0, 0): E}
    p_dir = DivisorDirection("p", Character((1, 0)))
    assert quantum_product(frame, one, p_dir, {"x": 0}) \
        == {cubic_degree(0, 0): P}


def test_eval_validation(cubic, frame):
    x = x_direction(cubic)
    with pytest.raises(ValidationError):
        quantum_product(frame, x, x, {"x": 1})
    with pytest.raises(UnknownDirection):
        quantum_product(frame, x, x, {"y": 0})


def test_residual_gate(cubic, frame):
    x = x_direction(cubic)
    shallow = JFrame(frame.series, frame.tau, frame.flow, F(2),
                     frame.directions, frame.model)
    with pytest.raises(FrameResidualTooLow):
        quantum_product(shallow, x, x, {"x": 0})
    # unit-unit only needs order one
    assert quantum_product(shallow, UnitDirection(), UnitDirection()) \
        == {cubic_degree(0, 0): UNIT}


def test_product_table_statuses(cubic, frame):
    x = x_direction(cubic)
    entries = [ProductEntry("1", UNIT),
               ProductEntry("p", P, DivisorDirection("p",
                                                     Character((1, 0)))),
               ProductEntry("p^2", P2),
               ProductEntry("1_(1/2)", E, x)]
    table = product_table(frame, entries)
    assert table.labels == ["1", "p", "p^2", "1_(1/2)"]
    status = [[c.status for c in row] for row in table.cells]
    assert status == [["ok"] * 4,
                      ["ok", "na", "na", "na"],
                      ["ok", "na", "na", "na"],
                      ["ok", "na", "na", "ok"]]
    assert table.cells[0][3].value == {cubic_degree(0, 0): E}
    assert table.cells[3][3].value \
        == {cubic_degree(0, 0): P2.scale(F(1, 3)),
            cubic_degree(1, 0): E.scale(F(-3, 2))}
    assert not table.warnings
    opened = product_table(frame, entries, allow_divisor=True)
    assert opened.cells[1][1].value \
        == {cubic_degree(0, 0): P2,
            cubic_degree(1, 0): E.scale(F(3, 2)),
            cubic_degree(2, 0): UNIT.scale(3)}
    assert opened.warnings


def test_integral_rescaling(cubic, frame):
    with open(config_path("p1112_cubic.json")) as fh:
        data = json.load(fh)
    for ring in data["rings"]:
        ring["integrals"] = [[m, str(F(v) * 4)]
                             for m, v in ring["integrals"]]
    scaled = load_config_data(data)
    engine = IFunctionEngine(scaled.presentation, scaled.model,
                             scaled.provider, scaled.generators)
    series = engine.big_I(scaled.trunc)
    mm = mirror_map(series, scaled.model)
    flow = auto_flow(mm, scaled.model)
    frame2 = normalize_frame(series, flow, scaled.model,
                             scaled.frame_directions())
    x = scaled.directions()["x"]
    got = quantum_product(frame2, x, x, {"x": 0})
    want = quantum_product(frame, x_direction(cubic), x, {"x": 0})
    assert got == want
    # the pairing, unlike the product, scales with the integrals
    assert scaled.model.orb_pairing(got[cubic_degree(1, 0)], E) \
        == 4 * F(-3, 4)
