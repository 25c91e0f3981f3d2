"""Degree-by-degree assembly of I-function coefficients.

The coefficient at an effective degree lives on the inverse of the sector
cut out by the degree's fractional parts. Weights pairing negatively feed
numerator factors, weights pairing positively feed inverted factors, and
section characters contribute the mirrored products. The range convention
at integral negative pairings is the one knob: the default form keeps the
ranges strict and hands the leftover divisor product to the companion
class, while the display forms widen the numerator range instead. Both
agree wherever both are defined; the tests check that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from .cohomology import CohomologyModel, CRClass, Poly
from .errors import (MissingTwistedClass, NotEffective, NontruncatingArgument,
                     SemipositivityViolated, ValidationError,
                     ZeroZCoefficient)
from .presentation import (Character, Degree, GitPresentation, degree_pairing,
                           enumerate_effective, sector_from_degree,
                           semistable_supports, support_profile)
from .series import (ExpPrefactorSpec, MultiSeries, TruncationSpec, ZLaurent,
                     apply_exp_prefactor)


@dataclass
class TwistedClassProvider:
    """Companion classes for degrees the default divisor product misses.

    Degrees where some section character pairs to a negative integer need an
    externally supplied class; notes record where each entry came from.
    """

    table: dict[Degree, CRClass] = field(default_factory=dict)
    notes: dict[Degree, str] = field(default_factory=dict)


def _character_poly(chi: Character, k: int) -> Poly:
    poly: Poly = {}
    for j, m in enumerate(chi.coords):
        if m:
            poly[tuple(1 if i == j else 0 for i in range(k))] = Fraction(m)
    return poly


def _apply_linear(model: CohomologyModel, layers: dict[int, CRClass],
                  poly: Poly, c: Fraction) -> dict[int, CRClass]:
    """Multiply z-layered classes by (divisor + c z)."""
    out: dict[int, CRClass] = {}

    def add(e, cl):
        out[e] = out[e] + cl if e in out else cl

    for e, cl in layers.items():
        top = model.multiply_poly(poly, cl)
        if not top.is_zero():
            add(e, top)
        if c:
            add(e + 1, cl.scale(c))
    return {e: cl for e, cl in out.items() if not cl.is_zero()}


def _apply_inverse(model: CohomologyModel, layers: dict[int, CRClass],
                   poly: Poly, c: Fraction) -> dict[int, CRClass]:
    """Multiply z-layered classes by the expansion of 1/(divisor + c z).

    The divisor is nilpotent in every sector ring, so the geometric series
    stops on its own.
    """
    if c == 0:
        raise ZeroZCoefficient(
            "factor %s has no z part and cannot be inverted" % (poly,))
    out: dict[int, CRClass] = {}

    def add(e, cl):
        out[e] = out[e] + cl if e in out else cl

    for e, cl in layers.items():
        term = cl.scale(Fraction(1) / c)
        shift = e - 1
        steps = 0
        while not term.is_zero():
            add(shift, term)
            term = model.multiply_poly(poly, term).scale(Fraction(-1) / c)
            shift -= 1
            steps += 1
            if steps > 10000:
                raise NontruncatingArgument(
                    "divisor %s is not nilpotent in its ring" % (poly,))
    return {e: cl for e, cl in out.items() if not cl.is_zero()}


class IFunctionEngine:
    """Builds I-function coefficients for one presentation and ring model."""

    def __init__(self, presentation: GitPresentation, model: CohomologyModel,
                 provider: TwistedClassProvider | None = None,
                 generators: list[Degree] | None = None):
        self.presentation = presentation
        self.model = model
        self.provider = provider or TwistedClassProvider()
        self.generators = list(generators or [])
        self._supports = semistable_supports(presentation)

    # -- degree bookkeeping -------------------------------------------------

    def target_sector(self, beta: Degree):
        return sector_from_degree(self.presentation, beta).inverse()

    def _require_effective(self, beta: Degree):
        prof = support_profile(self.presentation, beta, self._supports)
        if not prof.zss_nonempty:
            raise NotEffective(
                "degree %s has an empty semistable fixed locus"
                % (beta.coords,))
        return prof

    def _unit_layers(self, beta: Degree) -> dict[int, CRClass]:
        sector = self.target_sector(beta)
        ring = self.model.ring(sector)
        unit = {tuple(0 for _ in range(ring.k)): Fraction(1)}
        return {0: CRClass.from_poly(sector, ring.reduce(unit))}

    # -- factor entries: (divisor poly, z coefficient, inverted?) -----------

    def _ambient_entries(self, beta: Degree, inclusive: bool):
        k = self.presentation.rank
        entries = []
        for chi in self.presentation.rho:
            d = degree_pairing(beta, chi)
            poly = _character_poly(chi, k)
            if d < 0:
                start = ceil(d) if inclusive else floor(d) + 1
                for i in range(start, 0):
                    entries.append((poly, d - i, False))
            elif d > 0:
                for i in range(0, ceil(d)):
                    entries.append((poly, d - i, True))
        return entries

    def _section_entries(self, beta: Degree, inclusive: bool):
        k = self.presentation.rank
        entries = []
        for chi in self.presentation.tau:
            d = degree_pairing(beta, chi)
            poly = _character_poly(chi, k)
            if d > 0:
                for i in range(0, ceil(d)):
                    entries.append((poly, d - i, False))
            elif d < 0:
                start = ceil(d) if inclusive else floor(d) + 1
                for i in range(start, 0):
                    entries.append((poly, d - i, True))
        return entries

    def _run_entries(self, layers, entries) -> dict[int, CRClass]:
        for poly, c, inverted in entries:
            if not layers:
                break
            if inverted:
                layers = _apply_inverse(self.model, layers, poly, c)
            else:
                layers = _apply_linear(self.model, layers, poly, c)
        return layers

    # -- public factors ------------------------------------------------------

    def ambient_factor(self, beta: Degree, inclusive: bool = False) \
            -> ZLaurent:
        """Product of the weight factors alone, on the degree's sector."""
        self._require_effective(beta)
        layers = self._run_entries(self._unit_layers(beta),
                                   self._ambient_entries(beta, inclusive))
        return ZLaurent(layers)

    def ci_factor(self, beta: Degree, inclusive: bool = False) -> ZLaurent:
        """Product of the section-character factors alone."""
        self._require_effective(beta)
        layers = self._run_entries(self._unit_layers(beta),
                                   self._section_entries(beta, inclusive))
        return ZLaurent(layers)

    def twisted_class(self, beta: Degree) -> CRClass:
        """Companion class multiplying the strict-range factor product.

        When no section character pairs to a negative integer, the class is
        the product of the divisors whose pairing is a negative integer, on
        the inverse sector. Otherwise the provider table must supply it.
        """
        prof = self._require_effective(beta)
        if "negative-integral" in prof.tau_classes:
            if beta in self.provider.table:
                return self.provider.table[beta]
            raise MissingTwistedClass(
                "degree %s pairs to a negative integer with a section "
                "character and has no table entry" % (beta.coords,))
        sector = self.target_sector(beta)
        ring = self.model.ring(sector)
        k = self.presentation.rank
        poly = ring.reduce({tuple(0 for _ in range(k)): Fraction(1)})
        for chi in self.presentation.rho:
            d = degree_pairing(beta, chi)
            if d < 0 and d.denominator == 1:
                poly = ring.multiply(poly, _character_poly(chi, k))
                if not poly:
                    break
        return CRClass.from_poly(sector, poly)

    # -- coefficients --------------------------------------------------------

    def _assemble(self, beta: Degree, cls: CRClass, ambient_inclusive: bool,
                  section_inclusive: bool) -> ZLaurent:
        layers = {0: cls} if not cls.is_zero() else {}
        entries = (self._ambient_entries(beta, ambient_inclusive)
                   + self._section_entries(beta, section_inclusive))
        return ZLaurent(self._run_entries(layers, entries))

    def i_coefficient(self, beta: Degree) -> ZLaurent:
        """Strict-range coefficient with the companion class folded in."""
        self._require_effective(beta)
        return self._assemble(beta, self.twisted_class(beta), False, False)

    def _stratum_coefficient(self, beta: Degree, prof) -> ZLaurent:
        chi = self.presentation.tau[0]
        d = degree_pairing(beta, chi)
        if d >= 0 or d.denominator != 1:
            sector = self.target_sector(beta)
            ring = self.model.ring(sector)
            unit = {tuple(0 for _ in range(ring.k)): Fraction(1)}
            cls = CRClass.from_poly(sector, ring.reduce(unit))
            return self._assemble(beta, cls, True, True)
        if beta not in self.provider.table:
            raise MissingTwistedClass(
                "degree %s sits in the negative-integer stratum of the "
                "section pairing and has no table entry" % (beta.coords,))
        return self._assemble(beta, self.provider.table[beta], False, False)

    # -- series --------------------------------------------------------------

    def _degrees(self, trunc: TruncationSpec) -> list[Degree]:
        if trunc.theta != self.presentation.theta:
            raise ValidationError(
                "truncation is graded by a character other than the "
                "stability character")
        return enumerate_effective(self.presentation, self.generators,
                                   trunc.theta_bound)

    def _series(self, trunc: TruncationSpec,
                prefactor: ExpPrefactorSpec | None, tvars: int,
                per_degree) -> MultiSeries:
        if prefactor is not None and prefactor.entries:
            tvars = max(tvars, 1 + max(i for i, _ in prefactor.entries))
        m0 = tuple(0 for _ in range(tvars))
        coeffs = {}
        for beta in self._degrees(trunc):
            zl = per_degree(beta)
            if not zl.is_zero():
                coeffs[(beta, m0)] = zl
        series = MultiSeries(coeffs, trunc, tvars)
        if prefactor is not None and prefactor.entries:
            series = apply_exp_prefactor(series, prefactor, self.model)
        return series

    def big_I(self, trunc: TruncationSpec,
              prefactor: ExpPrefactorSpec | None = None,
              tvars: int = 0) -> MultiSeries:
        """Sum of strict-range coefficients over all effective degrees in
        the truncation, dressed with the exponential prefactor if any."""
        return self._series(trunc, prefactor, tvars, self.i_coefficient)

    def hypersurface_I(self, trunc: TruncationSpec,
                       prefactor: ExpPrefactorSpec | None = None,
                       tvars: int = 0) -> MultiSeries:
        """Single-section display form, routed stratum by stratum.

        Nonnegative and fractional section pairings take the widened
        numerator range with a plain fundamental class; negative integer
        pairings keep strict ranges and require a table entry.
        """
        if len(self.presentation.tau) != 1:
            raise ValidationError(
                "the stratified display form needs exactly one section "
                "character, got %d" % len(self.presentation.tau))

        def per_degree(beta):
            prof = self._require_effective(beta)
            return self._stratum_coefficient(beta, prof)

        return self._series(trunc, prefactor, tvars, per_degree)

    def semipositive_I(self, trunc: TruncationSpec,
                       prefactor: ExpPrefactorSpec | None = None,
                       tvars: int = 0) -> MultiSeries:
        """Display form valid when every section character pairs
        nonnegatively with every effective degree in range."""

        def per_degree(beta):
            self._require_effective(beta)
            for b, chi in enumerate(self.presentation.tau):
                d = degree_pairing(beta, chi)
                if d < 0:
                    raise SemipositivityViolated(
                        "section character %d pairs %s with effective "
                        "degree %s" % (b, d, beta.coords))
            sector = self.target_sector(beta)
            ring = self.model.ring(sector)
            unit = {tuple(0 for _ in range(ring.k)): Fraction(1)}
            cls = CRClass.from_poly(sector, ring.reduce(unit))
            return self._assemble(beta, cls, True, True)

        return self._series(trunc, prefactor, tvars, per_degree)
