"""Laurent polynomials in z and truncated series over (degree, t) keys.

A ZLaurent is a finite dict of z exponents to global cohomology classes.
A MultiSeries keys ZLaurent values by (Degree, t multi-index) pairs under a
truncation spec: degrees are kept while their theta pairing stays within
the bound, t orders while the total t degree does. No z truncation happens
unless the spec sets explicit clamps. Effectivity of degree keys is a
construction-time concern of the assembly code; the algebra here preserves
it because effective degrees form a semigroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import CohomologyModel, CRClass, Poly, poly_scale
from .errors import (NontruncatingArgument, UnknownDirection,
                     ZeroZCoefficient)
from .presentation import Character, Degree, SectorId, degree_pairing


class ZLaurent:
    """Finite Laurent polynomial in z with CRClass coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, CRClass] | None = None):
        self.terms = {e: c for e, c in (terms or {}).items()
                      if not c.is_zero()}

    @staticmethod
    def from_class(c: CRClass, z: int = 0) -> "ZLaurent":
        return ZLaurent({z: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, ZLaurent) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("ZLaurent is not hashable")

    def __add__(self, other: "ZLaurent") -> "ZLaurent":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return ZLaurent(out)

    def scale(self, c) -> "ZLaurent":
        return ZLaurent({e: cl.scale(c) for e, cl in self.terms.items()})

    def shift(self, n: int) -> "ZLaurent":
        return ZLaurent({e + n: c for e, c in self.terms.items()})

    def mul(self, other: "ZLaurent", model: CohomologyModel) -> "ZLaurent":
        out: dict[int, CRClass] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                p = model.multiply(c1, c2)
                e = e1 + e2
                out[e] = out[e] + p if e in out else p
        return ZLaurent(out)

    def plus(self) -> "ZLaurent":
        return ZLaurent({e: c for e, c in self.terms.items() if e >= 0})

    def minus(self) -> "ZLaurent":
        return ZLaurent({e: c for e, c in self.terms.items() if e < 0})

    def coefficient(self, e: int) -> CRClass:
        return self.terms.get(e, CRClass.zero())

    def clamp(self, floor: int | None, ceil: int | None) -> "ZLaurent":
        return ZLaurent({e: c for e, c in self.terms.items()
                         if (floor is None or e >= floor)
                         and (ceil is None or e <= ceil)})


def invert_linear_factor(model: CohomologyModel, sector: SectorId,
                         divisor: Poly, c: Fraction) -> ZLaurent:
    """Expansion of 1/(D + c z) on one sector.

    D is a nilpotent divisor class in the sector ring, c a nonzero rational.
    The geometric series 1/(cz) * sum (-D/(cz))^m is finite because powers
    of D eventually reduce to zero.
    """
    c = Fraction(c)
    if c == 0:
        raise ZeroZCoefficient("linear factor with zero z part: %s" % divisor)
    ring = model.ring(sector)
    divisor = ring.reduce(divisor)
    out: dict[int, CRClass] = {}
    power: Poly = ring.reduce({tuple(0 for _ in range(ring.k)): Fraction(1)})
    m = 0
    while power:
        cl = CRClass.from_poly(sector, poly_scale(
            power, Fraction((-1) ** m) / c ** (m + 1)))
        if not cl.is_zero():
            out[-(m + 1)] = cl
        power = ring.multiply(power, divisor)
        m += 1
        if m > ring.top_degree + 1:
            break
    return ZLaurent(out)


def linear_factor(model: CohomologyModel, sector: SectorId, divisor: Poly,
                  c: Fraction) -> ZLaurent:
    """The factor D + c z itself, as a ZLaurent on one sector."""
    ring = model.ring(sector)
    out: dict[int, CRClass] = {}
    red = ring.reduce(divisor)
    if red:
        out[0] = CRClass.from_poly(sector, red)
    if c:
        unit = ring.reduce({tuple(0 for _ in range(ring.k)): Fraction(1)})
        out[1] = CRClass.from_poly(sector, poly_scale(unit, Fraction(c)))
    return ZLaurent(out)


@dataclass(frozen=True)
class TruncationSpec:
    """Degree and t-order bounds. theta gives the degree grading."""

    theta: Character
    theta_bound: Fraction
    t_bound: int = 0
    z_floor: int | None = None
    z_ceil: int | None = None

    def degree_ok(self, beta: Degree) -> bool:
        return degree_pairing(beta, self.theta) <= self.theta_bound

    def key_ok(self, key) -> bool:
        beta, m = key
        return self.degree_ok(beta) and sum(m) <= self.t_bound

    def intersect(self, other: "TruncationSpec") -> "TruncationSpec":
        if self.theta != other.theta:
            raise ValueError("truncations graded by different characters")
        floor = self.z_floor if other.z_floor is None else (
            other.z_floor if self.z_floor is None
            else max(self.z_floor, other.z_floor))
        ceil = self.z_ceil if other.z_ceil is None else (
            other.z_ceil if self.z_ceil is None
            else min(self.z_ceil, other.z_ceil))
        return TruncationSpec(self.theta,
                              min(self.theta_bound, other.theta_bound),
                              min(self.t_bound, other.t_bound), floor, ceil)


@dataclass(frozen=True)
class TVarDirection:
    """Derivative along a declared t variable."""

    name: str
    index: int


@dataclass(frozen=True)
class NovikovDirection:
    """Derivative along a Novikov coordinate.

    functional must be integer valued on every degree the series carries;
    the derivative multiplies each term by that exponent and lowers the
    degree by the coordinate's generator.
    """

    name: str
    functional: tuple[Fraction, ...]
    generator: Degree

    def exponent(self, beta: Degree) -> Fraction:
        return sum((f * c for f, c in zip(self.functional, beta.coords)),
                   Fraction(0))


Key = tuple  # (Degree, t multi-index)


class MultiSeries:
    """Truncated series over (Degree, t) keys with ZLaurent values."""

    __slots__ = ("coeffs", "trunc", "tvars")

    def __init__(self, coeffs: dict[Key, ZLaurent], trunc: TruncationSpec,
                 tvars: int = 0):
        self.trunc = trunc
        self.tvars = tvars
        clean: dict[Key, ZLaurent] = {}
        for key, val in coeffs.items():
            if not trunc.key_ok(key):
                continue
            val = val.clamp(trunc.z_floor, trunc.z_ceil)
            if not val.is_zero():
                clean[key] = val
        self.coeffs = clean

    @staticmethod
    def zero(trunc: TruncationSpec, tvars: int = 0) -> "MultiSeries":
        return MultiSeries({}, trunc, tvars)

    def zero_key(self) -> Key:
        k = len(self.trunc.theta.coords)
        return (Degree(tuple(Fraction(0) for _ in range(k))),
                tuple(0 for _ in range(self.tvars)))

    def __eq__(self, other) -> bool:
        return (isinstance(other, MultiSeries)
                and self.coeffs == other.coeffs)

    def __hash__(self):
        raise TypeError("MultiSeries is not hashable")

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, key: Key) -> ZLaurent:
        return self.coeffs.get(key, ZLaurent())

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        trunc = self.trunc.intersect(other.trunc)
        out = dict(self.coeffs)
        for key, val in other.coeffs.items():
            out[key] = out[key] + val if key in out else val
        return MultiSeries(out, trunc, self.tvars)

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        return self + other.scale(-1)

    def scale(self, c) -> "MultiSeries":
        return MultiSeries({k: v.scale(c) for k, v in self.coeffs.items()},
                           self.trunc, self.tvars)

    def shift_z(self, n: int) -> "MultiSeries":
        return MultiSeries({k: v.shift(n) for k, v in self.coeffs.items()},
                           self.trunc, self.tvars)

    def mul(self, other: "MultiSeries", model: CohomologyModel) \
            -> "MultiSeries":
        if self.tvars != other.tvars:
            raise ValueError("series carry different t variable counts")
        trunc = self.trunc.intersect(other.trunc)
        out: dict[Key, ZLaurent] = {}
        for (b1, m1), v1 in self.coeffs.items():
            for (b2, m2), v2 in other.coeffs.items():
                key = (b1 + b2, tuple(x + y for x, y in zip(m1, m2)))
                if not trunc.key_ok(key):
                    continue
                prod = v1.mul(v2, model)
                out[key] = out[key] + prod if key in out else prod
        return MultiSeries(out, trunc, self.tvars)

    def truncate_plus(self) -> "MultiSeries":
        return MultiSeries({k: v.plus() for k, v in self.coeffs.items()},
                           self.trunc, self.tvars)

    def truncate_minus(self) -> "MultiSeries":
        return MultiSeries({k: v.minus() for k, v in self.coeffs.items()},
                           self.trunc, self.tvars)

    def z_coefficient(self, e: int) -> dict[Key, CRClass]:
        out = {}
        for key, val in self.coeffs.items():
            c = val.coefficient(e)
            if not c.is_zero():
                out[key] = c
        return out

    def differentiate(self, direction) -> "MultiSeries":
        out: dict[Key, ZLaurent] = {}
        if isinstance(direction, TVarDirection):
            i = direction.index
            for (beta, m), val in self.coeffs.items():
                if m[i] == 0:
                    continue
                key = (beta, tuple(x - (1 if j == i else 0)
                                   for j, x in enumerate(m)))
                term = val.scale(m[i])
                out[key] = out[key] + term if key in out else term
        elif isinstance(direction, NovikovDirection):
            for (beta, m), val in self.coeffs.items():
                e = direction.exponent(beta)
                if e == 0:
                    continue
                if e.denominator != 1:
                    raise UnknownDirection(
                        "functional %s is not integral on degree %s"
                        % (direction.name, beta.coords))
                key = (beta - direction.generator, m)
                term = val.scale(e)
                out[key] = out[key] + term if key in out else term
        else:
            raise UnknownDirection("cannot differentiate along %r"
                                   % (direction,))
        return MultiSeries(out, self.trunc, self.tvars)

    def scale_by_functional(self, functional: tuple[Fraction, ...]) \
            -> "MultiSeries":
        """Multiply each term by the functional's value on its degree."""
        out = {}
        for (beta, m), val in self.coeffs.items():
            e = sum((f * c for f, c in zip(functional, beta.coords)),
                    Fraction(0))
            if e:
                out[(beta, m)] = val.scale(e)
        return MultiSeries(out, self.trunc, self.tvars)


@dataclass
class ExpPrefactorSpec:
    """Data of the exponential prefactor exp((1/z) sum_i t_i u_i).

    Each entry pairs a t variable index with a polynomial u_i in the k
    divisor generators. On the coefficient at degree beta the generator
    H_j is shifted to H_j + beta_j z before u_i is evaluated.
    """

    entries: list[tuple[int, Poly]] = field(default_factory=list)


def _shifted_polynomial(u: Poly, beta: Degree, k: int) -> dict[int, Poly]:
    """u evaluated at (H_1 + beta_1 z, ..., H_k + beta_k z), as z layers."""
    out: dict[int, Poly] = {}
    for mono, c in u.items():
        layers: dict[int, Poly] = {0: {tuple(0 for _ in range(k)): c}}
        for j, e in enumerate(mono):
            unit_j = tuple(1 if i == j else 0 for i in range(k))
            for _ in range(e):
                nxt: dict[int, Poly] = {}
                for ze, poly in layers.items():
                    for m, v in poly.items():
                        mh = tuple(x + y for x, y in zip(m, unit_j))
                        lay = nxt.setdefault(ze, {})
                        lay[mh] = lay.get(mh, Fraction(0)) + v
                        if beta.coords[j]:
                            lay2 = nxt.setdefault(ze + 1, {})
                            lay2[m] = (lay2.get(m, Fraction(0))
                                       + v * beta.coords[j])
                layers = nxt
        for ze, poly in layers.items():
            acc = out.setdefault(ze, {})
            for m, v in poly.items():
                acc[m] = acc.get(m, Fraction(0)) + v
    return {ze: {m: v for m, v in poly.items() if v}
            for ze, poly in out.items()
            if any(v for v in poly.values())}


def apply_exp_prefactor(series: MultiSeries, spec: ExpPrefactorSpec,
                        model: CohomologyModel) -> MultiSeries:
    """Multiply a series by exp((1/z) sum_i t_i u_i(H + beta z)).

    The exponential is expanded to the series' t bound. Each power of a t
    variable carries one inverse power of z, and the shifted divisor
    polynomials are reduced sector by sector on the coefficient they end up
    multiplying, so twisted coefficients see the restricted divisors.
    """
    if not spec.entries:
        return series
    t_bound = series.trunc.t_bound
    out: dict[Key, ZLaurent] = {}

    def emit(key: Key, val: ZLaurent):
        if series.trunc.key_ok(key) and not val.is_zero():
            out[key] = out[key] + val if key in out else val

    for (beta, m), val in series.coeffs.items():
        arguments = {}
        for i, u in spec.entries:
            layers = _shifted_polynomial(u, beta, model.k)
            arguments[i] = ZLaurent({
                ze - 1: CRClass.from_poly(model.identity_sector(), poly)
                for ze, poly in layers.items()})

        def distribute(pos: int, m_now: tuple, factor: ZLaurent):
            if pos == len(spec.entries):
                emit((beta, m_now), factor)
                return
            i, _ = spec.entries[pos]
            distribute(pos + 1, m_now, factor)
            f = factor
            power = 0
            while sum(m_now) + power + 1 <= t_bound:
                power += 1
                f = f.mul(arguments[i], model).scale(Fraction(1, power))
                if f.is_zero():
                    break
                bumped = tuple(x + (power if j == i else 0)
                               for j, x in enumerate(m_now))
                distribute(pos + 1, bumped, f)

        distribute(0, m, val)
    return MultiSeries(out, series.trunc, series.tvars)


def exp_divisor_flow(series: MultiSeries, flow: MultiSeries, sign: int,
                     model: CohomologyModel) -> MultiSeries:
    """Multiply a series by exp(sign * flow / z).

    flow must be scalar (untwisted unit times rationals) with no constant
    term; each of its keys then carries positive theta or t grading, so the
    exponential terminates inside the truncation.
    """
    ident = model.identity_sector()
    unit_mono = tuple(0 for _ in range(model.k))
    for key, val in flow.coeffs.items():
        beta, m = key
        if beta.is_zero() and not any(m):
            raise NontruncatingArgument(
                "flow has a constant term, its exponential cannot truncate")
        for _, cl in val.terms.items():
            for s, part in cl.parts:
                if s != ident or set(part.poly()) - {unit_mono}:
                    raise NontruncatingArgument(
                        "flow is not a scalar multiple of the unit class")
    trunc = series.trunc.intersect(flow.trunc)
    arg = flow.shift_z(-1).scale(sign)
    acc = MultiSeries(dict(series.coeffs), trunc, series.tvars)
    term = series
    m = 0
    while True:
        m += 1
        term = term.mul(arg, model).scale(Fraction(1, m))
        if term.is_zero():
            break
        acc = acc + term
        if m > 10000:
            raise NontruncatingArgument("flow exponential failed to stop")
    return acc
