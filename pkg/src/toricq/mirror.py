"""Mirror map extraction, frame normalization, and quantum products.

The chain is: split off the nonnegative z part of z(I - 1) to get the
mirror map, flow the series by the scalar part of that map, check that what
remains looks like z + tau + O(1/z) order by order, then differentiate
twice and read the z^0 layer. Everything is exact; when the frame shape
fails at some insertion order the failure is recorded rather than patched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import CohomologyModel, CRClass
from .errors import (FrameResidualTooLow, NotUnital, PositivePowersRemain,
                     UnknownDirection, ValidationError)
from .presentation import Character, Degree, degree_pairing, zero_degree
from .series import (MultiSeries, NovikovDirection, TVarDirection, ZLaurent,
                     exp_divisor_flow)


@dataclass(frozen=True)
class UnitDirection:
    """Direction along the unit class: acts as a z shift on the frame."""

    name: str = "1"


@dataclass(frozen=True)
class DivisorDirection:
    """Direction along an untwisted divisor class.

    Acts as multiplication by the class over z plus the degree-scaling
    operator of its character. Experimental: there is no independent check
    of this bookkeeping on twisted degrees, so callers must opt in.
    """

    name: str
    character: Character


@dataclass
class MirrorMap:
    """The nonnegative-z part of z(I - 1), piece by piece."""

    mu: MultiSeries

    def piece(self, key) -> ZLaurent:
        return self.mu.coefficient(key)


def mirror_map(series: MultiSeries, model: CohomologyModel) -> MirrorMap:
    """Split off the z-nonnegative part of z(I - 1)."""
    zero = series.zero_key()
    if series.coefficient(zero) != ZLaurent.from_class(model.unit()):
        raise NotUnital("the constant coefficient is not the unit class")
    rest = {k: v for k, v in series.coeffs.items() if k != zero}
    mu = MultiSeries(rest, series.trunc, series.tvars)
    return MirrorMap(mu.shift_z(1).truncate_plus())


@dataclass
class PlusCheckEntry:
    key: tuple
    ok: bool
    got: ZLaurent
    want: ZLaurent


@dataclass
class PlusCheckReport:
    entries: list[PlusCheckEntry]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)


def plus_check(series: MultiSeries, mm: MirrorMap,
               model: CohomologyModel) -> PlusCheckReport:
    """Verify key by key that [z I]_+ is z at the origin plus the map.

    Definitionally true for a map produced by mirror_map from the same
    series; a corrupted map is flagged at exactly the keys it differs.
    """
    zi = series.shift_z(1)
    zero = series.zero_key()
    keys = set(zi.coeffs) | set(mm.mu.coeffs) | {zero}
    entries = []
    for key in sorted(keys, key=lambda k: (k[0].sort_key(), k[1])):
        got = zi.coefficient(key).plus()
        want = mm.piece(key)
        if key == zero:
            want = want + ZLaurent({1: model.unit()})
        entries.append(PlusCheckEntry(key, got == want, got, want))
    return PlusCheckReport(entries)


def auto_flow(mm: MirrorMap, model: CohomologyModel) -> MultiSeries:
    """The scalar part of the mirror map: unit-class multiples at z^0."""
    ident = model.identity_sector()
    unit_mono = tuple(0 for _ in range(model.k))
    out = {}
    for key, val in mm.mu.coeffs.items():
        poly = val.coefficient(0).part(ident)
        if not poly:
            continue
        c = poly.get(unit_mono, Fraction(0))
        if c:
            out[key] = ZLaurent({0: model.unit().scale(c)})
    return MultiSeries(out, mm.mu.trunc, mm.mu.tvars)


@dataclass
class JFrame:
    """A flowed series verified to have the shape 1 + tau/z + O(1/z^2).

    tau holds the linear insertion coefficients keyed like the series;
    residual_order is the smallest insertion order at which a stray z^0
    term was found (None when the whole truncation is clean). Products
    needing that order or more are refused.
    """

    series: MultiSeries
    tau: dict
    flow: MultiSeries
    residual_order: Fraction | None
    directions: tuple
    model: CohomologyModel

    def z_frame(self) -> MultiSeries:
        return self.series.shift_z(1)


def _insertion_degree(key, directions) -> Fraction:
    beta, m = key
    d = Fraction(sum(m))
    for nd in directions:
        if isinstance(nd, NovikovDirection):
            d += nd.exponent(beta)
    return d


def normalize_frame(series: MultiSeries, flow: MultiSeries,
                    model: CohomologyModel,
                    directions: tuple = ()) -> JFrame:
    """Flow the series and verify the small-frame shape.

    directions lists the insertion coordinates that grade the frame (all t
    variables count automatically). z-positive terms anywhere, z^0 terms at
    insertion degree 0, and degree-1 z^0 terms away from a coordinate's own
    key all fail; z^0 terms at degree 2 or more only cap residual_order.
    """
    flowed = exp_divisor_flow(series, flow, -1, model)
    frame = flowed.shift_z(1)
    zero = series.zero_key()
    if frame.coefficient(zero) != ZLaurent({1: model.unit()}):
        raise PositivePowersRemain(
            "the constant coefficient of the flowed series is not z times "
            "the unit")
    zero_m = tuple(0 for _ in range(series.tvars))
    pure = set()
    for nd in directions:
        if isinstance(nd, NovikovDirection):
            pure.add((nd.generator, zero_m))
        elif isinstance(nd, TVarDirection):
            pure.add((zero[0], tuple(1 if j == nd.index else 0
                                     for j in range(series.tvars))))
    for i in range(series.tvars):
        pure.add((zero[0], tuple(1 if j == i else 0
                                 for j in range(series.tvars))))
    tau = {}
    residual = None
    for key, val in frame.coeffs.items():
        if key == zero:
            continue
        high = sorted(e for e in val.terms if e >= 1)
        if high:
            raise PositivePowersRemain(
                "z^%d term remains at degree %s, t %s"
                % (high[-1], key[0].coords, key[1]))
        c0 = val.coefficient(0)
        if c0.is_zero():
            continue
        d = _insertion_degree(key, directions)
        if d == 1 and key in pure:
            tau[key] = c0
        elif d < 2:
            raise PositivePowersRemain(
                "constant-in-z term at degree %s, t %s is not a pure "
                "insertion" % (key[0].coords, key[1]))
        elif residual is None or d < residual:
            residual = d
    return JFrame(flowed, tau, flow, residual, tuple(directions), model)


def _mul_poly(series: MultiSeries, poly, model: CohomologyModel) \
        -> MultiSeries:
    out = {}
    for key, val in series.coeffs.items():
        t = ZLaurent({e: model.multiply_poly(poly, cl)
                      for e, cl in val.terms.items()})
        if not t.is_zero():
            out[key] = t
    return MultiSeries(out, series.trunc, series.tvars)


def _apply_direction(series: MultiSeries, direction,
                     model: CohomologyModel) -> MultiSeries:
    if isinstance(direction, (TVarDirection, NovikovDirection)):
        return series.differentiate(direction)
    if isinstance(direction, UnitDirection):
        return series.shift_z(-1)
    if isinstance(direction, DivisorDirection):
        k = model.k
        poly = {}
        for j, c in enumerate(direction.character.coords):
            if c:
                poly[tuple(1 if i == j else 0 for i in range(k))] = \
                    Fraction(c)
        scaled = series.scale_by_functional(
            tuple(Fraction(c) for c in direction.character.coords))
        return _mul_poly(series, poly, model).shift_z(-1) + scaled
    raise UnknownDirection("cannot differentiate along %r" % (direction,))


def quantum_product(frame: JFrame, dir_a, dir_b,
                    eval_at: dict | None = None) -> dict[Degree, CRClass]:
    """z^0 layer of z d_a d_b (z S), with the named coordinates set to 0.

    Divisor directions act outermost. The result is keyed by the degrees
    that survive evaluation.
    """
    dirs = [dir_a, dir_b]
    needed = 1 + sum(isinstance(d, (TVarDirection, NovikovDirection))
                     for d in dirs)
    if frame.residual_order is not None and needed > frame.residual_order:
        raise FrameResidualTooLow(
            "product needs the frame clean to insertion order %d but a "
            "stray term appears at order %s" % (needed, frame.residual_order))
    for v in (eval_at or {}).values():
        if Fraction(v) != 0:
            raise ValidationError(
                "directions can only be evaluated at 0, got %s" % (v,))
    known = {}
    for d in list(dirs) + list(frame.directions):
        name = getattr(d, "name", None)
        if name is not None:
            known.setdefault(name, d)
    evals = []
    for name in sorted(eval_at or {}):
        if name not in known:
            raise UnknownDirection("cannot evaluate unknown direction %s"
                                   % name)
        d = known[name]
        if not isinstance(d, (TVarDirection, NovikovDirection)):
            raise ValidationError(
                "direction %s is not a series coordinate" % name)
        evals.append(d)

    cur = frame.z_frame()
    for d in dirs:
        if not isinstance(d, DivisorDirection):
            cur = _apply_direction(cur, d, frame.model)
    for d in dirs:
        if isinstance(d, DivisorDirection):
            cur = _apply_direction(cur, d, frame.model)
    layer = cur.shift_z(1).z_coefficient(0)

    out: dict[Degree, CRClass] = {}
    for (beta, m), cl in layer.items():
        dead = False
        for d in evals:
            if isinstance(d, TVarDirection):
                if m[d.index] != 0:
                    dead = True
            elif d.exponent(beta) != 0:
                dead = True
        if dead:
            continue
        if any(m):
            raise ValidationError(
                "t coordinate with exponents %s was not evaluated" % (m,))
        out[beta] = out[beta] + cl if beta in out else cl
    return {b: c for b, c in out.items() if not c.is_zero()}


@dataclass
class ProductEntry:
    """One row/column of a product table request."""

    label: str
    cls: CRClass
    direction: object | None = None


@dataclass
class TableCell:
    status: str  # "ok" or "na"
    value: dict | None = None
    note: str = ""


@dataclass
class ProductTable:
    labels: list[str]
    cells: list[list[TableCell]]
    warnings: list[str] = field(default_factory=list)


def product_table(frame: JFrame, entries: list[ProductEntry],
                  allow_divisor: bool = False) -> ProductTable:
    """Pairwise products of the requested classes.

    Rows or columns headed by the unit class are filled by the string
    axiom. Other cells need both sides to carry a declared direction;
    divisor directions additionally need the opt-in flag.
    """
    model = frame.model
    unit = model.unit()
    zero = zero_degree(model.k)
    used_divisor = False
    cells = []
    for a in entries:
        row = []
        for b in entries:
            if a.cls == unit:
                row.append(TableCell("ok", {zero: b.cls}))
                continue
            if b.cls == unit:
                row.append(TableCell("ok", {zero: a.cls}))
                continue
            da, db = a.direction, b.direction
            if da is None or db is None:
                row.append(TableCell("na", None,
                                     "direction not parameterized"))
                continue
            divisor = (isinstance(da, DivisorDirection)
                       or isinstance(db, DivisorDirection))
            if divisor and not allow_divisor:
                row.append(TableCell("na", None,
                                     "divisor direction needs opt-in"))
                continue
            ev = {d.name: 0
                  for d in tuple(frame.directions) + (da, db)
                  if isinstance(d, (TVarDirection, NovikovDirection))}
            row.append(TableCell("ok", quantum_product(frame, da, db, ev)))
            used_divisor = used_divisor or divisor
        cells.append(row)
    warnings = []
    if used_divisor:
        warnings.append(
            "experimental: divisor-direction products have no independent "
            "cross-check on twisted degrees")
    return ProductTable([e.label for e in entries], cells, warnings)
