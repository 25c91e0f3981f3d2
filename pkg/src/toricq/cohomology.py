"""Finite models of sector cohomology rings and the orbifold pairing.

Each inertia sector carries a ring presented by exponent-vector monomials in
the k ambient divisor generators H_1..H_k: a linear substitution for
generators that die on the sector, an explicit monomial basis, a list of
vanishing monomials, optional extra rewrite rules, and an integral table.
Classes never leave this normal form, so equality is dictionary equality.

A global class is a finite sum of sector classes. Products where both
factors sit in nontrivial sectors are rejected: the models here only know
how to multiply by classes pulled back from the untwisted ambient ring,
which is all the I-function assembly ever needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (NonConfluentRingSpec, SingularPairingMatrix,
                     TwistedProductUnsupported, ValidationError)
from .presentation import Character, SectorId

Monomial = tuple  # exponent vector over the k generators
Poly = dict      # Monomial -> Fraction


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, Fraction(0)) + c
        if s:
            out[m] = s
        elif m in out:
            del out[m]
    return out


def poly_scale(a: Poly, c) -> Poly:
    c = Fraction(c)
    if c == 0:
        return {}
    return {m: v * c for m, v in a.items()}


def poly_mul_raw(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            s = out.get(m, Fraction(0)) + c1 * c2
            if s:
                out[m] = s
            elif m in out:
                del out[m]
    return out


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass
class RingSpec:
    """Raw, uncompiled description of one sector ring."""

    sector: SectorId
    generators: int
    substitutions: dict[int, Poly] = field(default_factory=dict)
    basis: list[Monomial] = field(default_factory=list)
    vanishing: list[Monomial] = field(default_factory=list)
    reductions: dict[Monomial, Poly] = field(default_factory=dict)
    integrals: dict[Monomial, Fraction] = field(default_factory=dict)
    weight: Fraction = Fraction(1)


class SectorRing:
    """Compiled ring with a total, cached monomial reduction.

    Reduction of a monomial tries, in order: divisibility by a vanishing
    monomial (to zero), basis membership, an explicit rewrite rule, and
    otherwise peels one generator off and multiplies the reduced remainder
    back in. For the peel step to terminate, every product of a basis
    monomial with a single generator must reduce by one of the three direct
    rules. That closure is checked here at construction and any miss raises
    NonConfluentRingSpec naming the monomial.
    """

    def __init__(self, spec: RingSpec):
        self.spec = spec
        self.sector = spec.sector
        self.k = spec.generators
        for j, combo in spec.substitutions.items():
            for m in combo:
                if sum(m) != 1:
                    raise ValidationError(
                        "substitution for generator %d is not linear" % j)
                live = m.index(1)
                if live in spec.substitutions:
                    raise ValidationError(
                        "substitution target H_%d is itself substituted" % live)
        self.survivors = [j for j in range(self.k)
                          if j not in spec.substitutions]
        self.basis = list(spec.basis)
        self.basis_set = set(self.basis)
        if not self.basis:
            raise ValidationError("sector %s has an empty basis" % self.sector)
        for m in self.basis + spec.vanishing + list(spec.reductions):
            if any(m[j] != 0 for j in spec.substitutions):
                raise ValidationError(
                    "monomial %s uses a substituted generator" % (m,))
        for m in self.basis:
            if any(_divides(v, m) for v in spec.vanishing):
                raise ValidationError(
                    "basis monomial %s is killed by a vanishing monomial"
                    % (m,))
        for m, combo in spec.reductions.items():
            if any(t not in self.basis_set for t in combo):
                raise NonConfluentRingSpec(
                    "rewrite of %s leaves the basis" % (m,))
        self.top_degree = max(sum(m) for m in self.basis)
        self._cache: dict[Monomial, Poly] = {}
        self._check_closure()
        missing = [m for m in self.basis if m not in spec.integrals]
        if missing:
            raise ValidationError(
                "integral table misses basis monomials %s" % missing)

    def _direct(self, m: Monomial) -> Poly | None:
        if any(_divides(v, m) for v in self.spec.vanishing):
            return {}
        if m in self.basis_set:
            return {m: Fraction(1)}
        if m in self.spec.reductions:
            return dict(self.spec.reductions[m])
        return None

    def _check_closure(self):
        gens = [tuple(1 if i == j else 0 for i in range(self.k))
                for j in self.survivors]
        unit = tuple(0 for _ in range(self.k))
        if self._direct(unit) is None:
            raise NonConfluentRingSpec(
                "sector %s: the unit monomial does not reduce" % self.sector)
        for b in self.basis:
            for g in gens:
                m = tuple(x + y for x, y in zip(b, g))
                if self._direct(m) is None:
                    raise NonConfluentRingSpec(
                        "sector %s: no rule reduces %s" % (self.sector, m))

    def reduce_monomial(self, m: Monomial) -> Poly:
        cached = self._cache.get(m)
        if cached is not None:
            return dict(cached)
        direct = self._direct(m)
        if direct is None:
            j = next(i for i in self.survivors if m[i] > 0)
            g = tuple(1 if i == j else 0 for i in range(self.k))
            rest = self.reduce_monomial(
                tuple(x - y for x, y in zip(m, g)))
            out: Poly = {}
            for b, c in rest.items():
                step = self._direct(tuple(x + y for x, y in zip(b, g)))
                # closure check at construction makes this unreachable
                if step is None:
                    raise NonConfluentRingSpec(
                        "sector %s: no rule reduces %s" % (self.sector, m))
                out = poly_add(out, poly_scale(step, c))
            direct = out
        self._cache[m] = dict(direct)
        return direct

    def reduce(self, poly: Poly) -> Poly:
        """Normal form of a polynomial, applying substitutions first."""
        out: Poly = {}
        for m, c in poly.items():
            expanded = {tuple(m[j] if j in self.survivors else 0
                              for j in range(self.k)): Fraction(1)}
            for j, combo in self.spec.substitutions.items():
                for _ in range(m[j]):
                    expanded = poly_mul_raw(expanded, combo)
                    if not expanded:
                        break
            for mm, cc in expanded.items():
                out = poly_add(out, poly_scale(self.reduce_monomial(mm),
                                               c * cc))
        return out

    def multiply(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(poly_mul_raw(a, b))

    def integrate(self, a: Poly) -> Fraction:
        total = Fraction(0)
        for m, c in a.items():
            total += c * self.spec.integrals[m]
        return total


@dataclass(frozen=True)
class SectorClass:
    sector: SectorId
    coeffs: tuple  # sorted tuple of (Monomial, Fraction)

    @staticmethod
    def make(sector: SectorId, poly: Poly) -> "SectorClass":
        items = tuple(sorted((m, c) for m, c in poly.items() if c != 0))
        return SectorClass(sector, items)

    def poly(self) -> Poly:
        return {m: c for m, c in self.coeffs}

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class CRClass:
    """A finite sum of sector classes, keyed by sector."""

    parts: tuple  # sorted tuple of (SectorId, SectorClass)

    @staticmethod
    def make(parts: dict[SectorId, SectorClass]) -> "CRClass":
        items = tuple(sorted(((s, c) for s, c in parts.items()
                              if not c.is_zero()),
                             key=lambda it: it[0].coords))
        return CRClass(items)

    @staticmethod
    def zero() -> "CRClass":
        return CRClass(())

    @staticmethod
    def from_poly(sector: SectorId, poly: Poly) -> "CRClass":
        return CRClass.make({sector: SectorClass.make(sector, poly)})

    def part(self, sector: SectorId) -> Poly:
        for s, c in self.parts:
            if s == sector:
                return c.poly()
        return {}

    def sectors(self):
        return [s for s, _ in self.parts]

    def is_zero(self) -> bool:
        return not self.parts

    def __add__(self, other: "CRClass") -> "CRClass":
        acc = {s: c.poly() for s, c in self.parts}
        for s, c in other.parts:
            acc[s] = poly_add(acc.get(s, {}), c.poly())
        return CRClass.make({s: SectorClass.make(s, p)
                             for s, p in acc.items()})

    def __sub__(self, other: "CRClass") -> "CRClass":
        return self + other.scale(-1)

    def scale(self, c) -> "CRClass":
        c = Fraction(c)
        if c == 0:
            return CRClass.zero()
        return CRClass(tuple(
            (s, SectorClass(s, tuple((m, v * c) for m, v in cl.coeffs)))
            for s, cl in self.parts))


def unit_class(k: int) -> CRClass:
    ident = SectorId(tuple(Fraction(0) for _ in range(k)))
    return CRClass.from_poly(ident, {tuple(0 for _ in range(k)): Fraction(1)})


class CohomologyModel:
    """The collection of sector rings plus the pairing conventions."""

    def __init__(self, specs: list[RingSpec]):
        self.rings: dict[SectorId, SectorRing] = {}
        for spec in specs:
            if spec.sector in self.rings:
                raise ValidationError("duplicate ring for sector %s"
                                      % spec.sector)
            self.rings[spec.sector] = SectorRing(spec)
        ks = {r.k for r in self.rings.values()}
        if len(ks) > 1:
            raise ValidationError("rings disagree on the generator count")
        self.k = ks.pop() if ks else 0

    def ring(self, sector: SectorId) -> SectorRing:
        try:
            return self.rings[sector]
        except KeyError:
            raise ValidationError("no ring declared for sector %s" % sector) \
                from None

    def identity_sector(self) -> SectorId:
        return SectorId(tuple(Fraction(0) for _ in range(self.k)))

    def unit(self) -> CRClass:
        return unit_class(self.k)

    def restrict_character(self, sector: SectorId, chi: Character) -> Poly:
        """Normal form of the divisor class c_1(L_chi) on a sector."""
        ring = self.ring(sector)
        poly: Poly = {}
        for j, m in enumerate(chi.coords):
            if m:
                mono = tuple(1 if i == j else 0 for i in range(self.k))
                poly = poly_add(poly, {mono: Fraction(m)})
        return ring.reduce(poly)

    def multiply(self, a: CRClass, b: CRClass) -> CRClass:
        """Sector-aware product; at most one factor may be twisted."""
        acc: dict[SectorId, Poly] = {}
        for g, ca in a.parts:
            for h, cb in b.parts:
                if g.is_identity():
                    target = h
                elif h.is_identity():
                    target = g
                else:
                    raise TwistedProductUnsupported(
                        "cannot multiply sectors %s and %s" % (g, h))
                ring = self.ring(target)
                prod = ring.multiply(ca.poly(), cb.poly())
                acc[target] = poly_add(acc.get(target, {}), prod)
        return CRClass.make({s: SectorClass.make(s, p)
                             for s, p in acc.items()})

    def multiply_poly(self, poly: Poly, cl: CRClass) -> CRClass:
        """Multiply by an untwisted polynomial representative, reduced on
        whatever sector each part of cl lives in."""
        acc: dict[SectorId, Poly] = {}
        for s, part in cl.parts:
            ring = self.ring(s)
            acc[s] = ring.multiply(poly, part.poly())
        return CRClass.make({s: SectorClass.make(s, p)
                             for s, p in acc.items()})

    def orb_pairing(self, a: CRClass, b: CRClass) -> Fraction:
        """Integrate a against b over the inertia stack.

        The part of a on sector g pairs with the part of b on the inverse
        sector; both rings must present the same basis, the product is
        reduced on g and integrated there with the sector weight.
        """
        total = Fraction(0)
        for g, ca in a.parts:
            h = g.inverse()
            pb = b.part(h)
            if not pb:
                continue
            ring_g = self.ring(g)
            ring_h = self.ring(h)
            if ring_g.basis != ring_h.basis:
                raise ValidationError(
                    "sectors %s and %s pair but present different bases"
                    % (g, h))
            prod = ring_g.multiply(ca.poly(), pb)
            total += ring_g.spec.weight * ring_g.integrate(prod)
        return total

    def dual_basis(self, basis: list[CRClass]) -> list[CRClass]:
        """Classes dual to the given ones under the orbifold pairing."""
        n = len(basis)
        mat = [[self.orb_pairing(basis[i], basis[j]) for j in range(n)]
               for i in range(n)]
        inv = linalg.invert(mat)
        if inv is None:
            raise SingularPairingMatrix(
                "pairing matrix on the declared basis is singular")
        duals = []
        for b in range(n):
            acc = CRClass.zero()
            for g in range(n):
                if inv[g][b]:
                    acc = acc + basis[g].scale(inv[g][b])
            duals.append(acc)
        return duals
