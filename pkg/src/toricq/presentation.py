"""GIT presentation data: weights, stability, sectors, effective degrees.

A presentation is a torus (C*)^k acting on C^n by integer weight vectors
rho_1..rho_n, a stability character theta, and the characters tau_1..tau_c
cutting out a complete intersection. Degrees beta live in the dual side:
a degree is the tuple of its pairings with the k coordinate characters, so
beta(L_chi) for chi = sum m_j pi_j is just the dot product m . beta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import linalg
from .errors import (EmptySemistableLocus, GeneratorNotPositive,
                     InfiniteStabilizer, RankDeficient)


@dataclass(frozen=True)
class Character:
    """An integer character of (C*)^k, stored as its exponent vector."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if not all(isinstance(c, int) for c in self.coords):
            raise TypeError("character coordinates must be integers")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


@dataclass(frozen=True)
class Degree:
    """A rational degree, stored as its pairings with the basis characters."""

    coords: tuple[Fraction, ...]

    def __add__(self, other: "Degree") -> "Degree":
        return Degree(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Degree") -> "Degree":
        return Degree(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, n) -> "Degree":
        return Degree(tuple(Fraction(n) * c for c in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def sort_key(self):
        return tuple(self.coords)


def zero_degree(k: int) -> Degree:
    return Degree(tuple(Fraction(0) for _ in range(k)))


@dataclass(frozen=True)
class SectorId:
    """An element of the finite grading group, coordinates in [0, 1)."""

    coords: tuple[Fraction, ...]

    def is_identity(self) -> bool:
        return all(c == 0 for c in self.coords)

    def inverse(self) -> "SectorId":
        return SectorId(tuple((-c) % 1 for c in self.coords))

    def order(self) -> int:
        return lcm(*[c.denominator for c in self.coords]) if self.coords else 1

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coords)


@dataclass(frozen=True)
class GitPresentation:
    rho: tuple[Character, ...]
    theta: Character
    tau: tuple[Character, ...]

    def __post_init__(self):
        k = len(self.theta.coords)
        for ch in (*self.rho, *self.tau):
            if len(ch.coords) != k:
                raise ValueError("all characters must have the same length")
        if len(self.rho) < k:
            raise ValueError("need at least as many weights as the torus rank")

    @property
    def rank(self) -> int:
        return len(self.theta.coords)

    @property
    def n(self) -> int:
        return len(self.rho)


def degree_pairing(beta: Degree, chi: Character) -> Fraction:
    """beta(L_chi), the pairing of a degree with a character."""
    return sum((Fraction(m) * b for m, b in zip(chi.coords, beta.coords)),
               Fraction(0))


def semistable_supports(p: GitPresentation) -> list[frozenset]:
    """Inclusion-minimal coordinate sets that keep theta semistable.

    S is semistable when theta lies in the rational cone of {rho_i : i in S}.
    A minimal such S is linearly independent with all cone coefficients
    strictly positive (any zero coefficient would shrink S), so it suffices
    to scan independent subsets of size at most k.
    """
    if p.theta.is_zero():
        return []
    rho_rows = [list(ch.coords) for ch in p.rho]
    target = list(p.theta.coords)
    found = []
    from itertools import combinations
    for size in range(1, p.rank + 1):
        for subset in combinations(range(p.n), size):
            sub = [rho_rows[i] for i in subset]
            if not linalg.independent(sub):
                continue
            coeffs = linalg.positive_combination(target, sub)
            if coeffs is not None and all(c > 0 for c in coeffs):
                found.append(frozenset(subset))
    return sorted(found, key=lambda s: sorted(s))


@dataclass
class StabilizerInfo:
    support: frozenset
    rank: int
    order: int
    elements: tuple[SectorId, ...]


@dataclass
class ValidationReport:
    supports: list[frozenset]
    stabilizers: list[StabilizerInfo]
    exponent: int

    def lines(self) -> list[str]:
        out = []
        for st in self.stabilizers:
            ids = " ".join(str(e) for e in st.elements)
            out.append("support {%s}: rank %d, stabilizer order %d, elements %s"
                       % (",".join(str(i) for i in sorted(st.support)),
                          st.rank, st.order, ids))
        out.append("exponent %d" % self.exponent)
        return out


def validate_presentation(p: GitPresentation) -> ValidationReport:
    """Check the presentation defines a proper Deligne-Mumford quotient.

    Raises RankDeficient when the weights do not span, EmptySemistableLocus
    when no support exists (in particular for theta = 0), InfiniteStabilizer
    when a minimal support has a positive dimensional stabilizer. On success
    reports every minimal support with its finite stabilizer subgroup and
    the lcm of their orders.
    """
    rho_rows = [list(ch.coords) for ch in p.rho]
    if linalg.rank(rho_rows) < p.rank:
        raise RankDeficient(
            "weights span rank %d < %d" % (linalg.rank(rho_rows), p.rank))
    if p.theta.is_zero():
        raise EmptySemistableLocus("theta = 0 is not a stability condition")
    supports = semistable_supports(p)
    if not supports:
        raise EmptySemistableLocus(
            "theta %s lies in no weight cone" % (p.theta.coords,))
    stabs = []
    for s in supports:
        sub = [rho_rows[i] for i in sorted(s)]
        r = linalg.rank(sub)
        if r < p.rank:
            raise InfiniteStabilizer(
                "support {%s} has stabilizer rank %d > 0"
                % (",".join(str(i) for i in sorted(s)), p.rank - r))
        # minimal supports are independent, so here the matrix is square
        group = linalg.torsion_subgroup(sub)
        elements = tuple(sorted((SectorId(v) for v in group),
                                key=lambda e: e.coords))
        stabs.append(StabilizerInfo(s, r, len(elements), elements))
    exponent = lcm(*[st.order for st in stabs])
    return ValidationReport(supports, stabs, exponent)


def sector_from_degree(p: GitPresentation, beta: Degree) -> SectorId:
    """The grading-group element of a degree: its coordinates mod 1."""
    return SectorId(tuple(c % 1 for c in beta.coords))


def enumerate_sectors(p: GitPresentation) -> list[SectorId]:
    """Union of the stabilizer subgroups over all minimal supports."""
    report = validate_presentation(p)
    seen = {}
    for st in report.stabilizers:
        for e in st.elements:
            seen[e.coords] = e
    return [seen[c] for c in sorted(seen)]


@dataclass(frozen=True)
class SupportProfile:
    """Integrality pattern of one degree against every weight and section."""

    nonneg_integral: frozenset
    negative_integral: frozenset
    fractional: frozenset
    tau_classes: tuple[str, ...]
    zss_nonempty: bool


def _cls(t: Fraction) -> str:
    if t.denominator == 1:
        return "nonneg-integral" if t >= 0 else "negative-integral"
    return "nonintegral-nonneg" if t >= 0 else "negative-fractional"


def support_profile(p: GitPresentation, beta: Degree,
                    supports: list[frozenset] | None = None) -> SupportProfile:
    """Classify every rho pairing and tau pairing of a degree.

    zss_nonempty records whether some minimal semistable support survives
    inside the coordinates whose pairing is a nonnegative integer; those are
    exactly the coordinates left alive on the fixed locus after the degree's
    negative-integer directions are cut away.
    """
    if supports is None:
        supports = semistable_supports(p)
    nn, neg, frac = set(), set(), set()
    for i, ch in enumerate(p.rho):
        t = degree_pairing(beta, ch)
        if t.denominator == 1:
            (nn if t >= 0 else neg).add(i)
        else:
            frac.add(i)
    tau_classes = tuple(_cls(degree_pairing(beta, ch)) for ch in p.tau)
    alive = any(s <= nn for s in supports)
    return SupportProfile(frozenset(nn), frozenset(neg), frozenset(frac),
                          tau_classes, alive)


def enumerate_effective(p: GitPresentation, generators: list[Degree],
                        theta_bound: Fraction,
                        require_support: bool = True) -> list[Degree]:
    """All N-combinations of the generators up to the theta bound.

    Each generator must pair strictly positively with theta, which makes the
    enumeration finite and is also the semigroup positivity the theory
    demands. Degrees whose fixed locus dies (no semistable support inside
    the nonnegative integral pattern) contribute nothing and are dropped
    unless require_support is switched off.
    """
    bound = Fraction(theta_bound)
    gens = []
    for g in generators:
        t = degree_pairing(g, p.theta)
        if g.is_zero():
            continue
        if t <= 0:
            raise GeneratorNotPositive(
                "generator %s pairs %s with theta" % (g.coords, t))
        gens.append((g, t))
    supports = semistable_supports(p)
    found = {zero_degree(p.rank).coords: zero_degree(p.rank)}
    frontier = [(zero_degree(p.rank), Fraction(0))]
    while frontier:
        nxt = []
        for beta, t in frontier:
            for g, gt in gens:
                t2 = t + gt
                if t2 > bound:
                    continue
                b2 = beta + g
                if b2.coords in found:
                    continue
                found[b2.coords] = b2
                nxt.append((b2, t2))
        frontier = nxt
    out = []
    for beta in found.values():
        if require_support:
            prof = support_profile(p, beta, supports)
            if not prof.zss_nonempty:
                continue
        out.append(beta)
    out.sort(key=lambda b: (degree_pairing(b, p.theta), b.sort_key()))
    return out
