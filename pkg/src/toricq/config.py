"""JSON configuration loading, validation, and series serialization.

One JSON document describes a run: the presentation data, the degree
generators, named degree coordinates, one ring per inertia sector, the
companion-class table with a provenance note per entry, truncation bounds,
an optional exponential prefactor, the flow choice, and the product basis.
Rationals are written as strings like "-3/2" (plain integers also pass);
floats are rejected. The same encoding is reused verbatim for emitting and
re-reading series, so CLI JSON output round-trips through this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import CohomologyModel, CRClass, Poly, RingSpec
from .errors import ParseError, ValidationError
from .ifunction import TwistedClassProvider
from .presentation import (Character, Degree, GitPresentation,
                           ValidationReport, enumerate_sectors, SectorId,
                           validate_presentation)
from .series import (ExpPrefactorSpec, MultiSeries, NovikovDirection,
                     TruncationSpec, TVarDirection, ZLaurent)

SCHEMA = "engine/1"


# -- scalar parsing ----------------------------------------------------------

def _frac(v, where: str) -> Fraction:
    if isinstance(v, bool):
        raise ParseError("%s: expected a rational, got a boolean" % where)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError("%s: bad rational %r (%s)" % (where, v, exc)) \
                from None
    raise ParseError("%s: rationals must be strings or integers, got %r"
                     % (where, v))


def _int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError("%s: expected an integer, got %r" % (where, v))
    return v


def _list(v, where: str) -> list:
    if not isinstance(v, list):
        raise ParseError("%s: expected a list, got %r" % (where, v))
    return v


def _dict(v, where: str) -> dict:
    if not isinstance(v, dict):
        raise ParseError("%s: expected an object, got %r" % (where, v))
    return v


def _str(v, where: str) -> str:
    if not isinstance(v, str):
        raise ParseError("%s: expected a string, got %r" % (where, v))
    return v


def _character(v, where: str) -> Character:
    return Character(tuple(_int(x, where) for x in _list(v, where)))


def _degree(v, where: str) -> Degree:
    return Degree(tuple(_frac(x, where) for x in _list(v, where)))


def _sector(v, where: str) -> SectorId:
    return SectorId(tuple(_frac(x, where) for x in _list(v, where)))


def _mono(v, where: str) -> tuple:
    mono = tuple(_int(x, where) for x in _list(v, where))
    if any(x < 0 for x in mono):
        raise ParseError("%s: negative exponent in monomial %s" % (where, v))
    return mono


# -- polynomial / class / series codecs ---------------------------------------

def parse_poly(v, where: str) -> Poly:
    out: Poly = {}
    for i, term in enumerate(_list(v, where)):
        t = _list(term, "%s[%d]" % (where, i))
        if len(t) != 2:
            raise ParseError("%s[%d]: polynomial terms are [monomial, "
                             "coefficient] pairs" % (where, i))
        m = _mono(t[0], "%s[%d]" % (where, i))
        if m in out:
            raise ParseError("%s[%d]: duplicate monomial %s" % (where, i, m))
        c = _frac(t[1], "%s[%d]" % (where, i))
        if c:
            out[m] = c
    return out


def poly_to_json(poly: Poly) -> list:
    return [[list(m), str(poly[m])] for m in sorted(poly)]


def parse_class(v, where: str, model: CohomologyModel | None = None) \
        -> CRClass:
    total = CRClass.zero()
    for i, part in enumerate(_list(v, where)):
        p = _dict(part, "%s[%d]" % (where, i))
        sector = _sector(p.get("sector"), "%s[%d].sector" % (where, i))
        poly = parse_poly(p.get("poly"), "%s[%d].poly" % (where, i))
        if model is not None:
            poly = model.ring(sector).reduce(poly)
        total = total + CRClass.from_poly(sector, poly)
    return total


def class_to_json(cl: CRClass) -> list:
    return [{"sector": [str(c) for c in s.coords],
             "poly": poly_to_json(sc.poly())}
            for s, sc in cl.parts]


def series_to_json(series: MultiSeries) -> list:
    out = []
    for key in sorted(series.coeffs, key=lambda k: (k[0].sort_key(), k[1])):
        beta, m = key
        val = series.coeffs[key]
        out.append({
            "degree": [str(c) for c in beta.coords],
            "t": list(m),
            "terms": [{"z": e, "class": class_to_json(val.terms[e])}
                      for e in sorted(val.terms, reverse=True)],
        })
    return out


def parse_series(v, trunc: TruncationSpec, tvars: int, where: str,
                 model: CohomologyModel | None = None) -> MultiSeries:
    coeffs = {}
    for i, entry in enumerate(_list(v, where)):
        e = _dict(entry, "%s[%d]" % (where, i))
        beta = _degree(e.get("degree"), "%s[%d].degree" % (where, i))
        m = tuple(_int(x, "%s[%d].t" % (where, i))
                  for x in _list(e.get("t", []), "%s[%d].t" % (where, i)))
        if len(m) != tvars:
            raise ParseError("%s[%d]: expected %d t exponents, got %d"
                             % (where, i, tvars, len(m)))
        terms = {}
        for j, term in enumerate(_list(e.get("terms"),
                                       "%s[%d].terms" % (where, i))):
            t = _dict(term, "%s[%d].terms[%d]" % (where, i, j))
            z = _int(t.get("z"), "%s[%d].terms[%d].z" % (where, i, j))
            terms[z] = parse_class(t.get("class"),
                                   "%s[%d].terms[%d].class" % (where, i, j),
                                   model)
        coeffs[(beta, m)] = ZLaurent(terms)
    return MultiSeries(coeffs, trunc, tvars)


# -- the configuration object -------------------------------------------------

@dataclass
class ProductRequest:
    label: str
    cls: CRClass
    direction: str | None = None
    divisor_character: Character | None = None


@dataclass
class EngineConfig:
    presentation: GitPresentation
    report: ValidationReport
    model: CohomologyModel
    provider: TwistedClassProvider
    generators: list[Degree]
    trunc: TruncationSpec
    tvars: int
    prefactor: ExpPrefactorSpec
    tvar_names: list[str]
    novikov: list[NovikovDirection]
    insertion: set[str]
    flow: str | MultiSeries
    products: list[ProductRequest]
    generator_names: list[str]
    table_notes: dict[Degree, str] = field(default_factory=dict)

    def directions(self) -> dict:
        """Name -> direction object, for every coordinate a product or a
        derivative can refer to. Divisor directions come from product
        entries that declare a character."""
        from .mirror import DivisorDirection
        out: dict = {}

        def put(name, d):
            if name in out:
                raise ValidationError("direction name %r declared twice"
                                      % name)
            out[name] = d

        for nd in self.novikov:
            put(nd.name, nd)
        for i, name in enumerate(self.tvar_names):
            put(name, TVarDirection(name, i))
        for pr in self.products:
            if pr.divisor_character is not None:
                put(pr.label, DivisorDirection(pr.label,
                                               pr.divisor_character))
        return out

    def frame_directions(self) -> tuple:
        dirs = self.directions()
        out = [dirs[name] for name in self.tvar_names]
        out.extend(dirs[nd.name] for nd in self.novikov
                   if nd.name in self.insertion)
        return tuple(out)


def _load_rings(data, k: int) -> list[RingSpec]:
    specs = []
    for i, entry in enumerate(_list(data, "rings")):
        where = "rings[%d]" % i
        e = _dict(entry, where)
        sector = _sector(e.get("sector"), where + ".sector")
        subs = {}
        for key, poly in _dict(e.get("substitutions", {}),
                               where + ".substitutions").items():
            try:
                j = int(key)
            except ValueError:
                raise ParseError("%s.substitutions: generator index %r"
                                 % (where, key)) from None
            subs[j] = parse_poly(poly, "%s.substitutions[%s]" % (where, key))
        basis = [_mono(m, where + ".basis")
                 for m in _list(e.get("basis"), where + ".basis")]
        vanish = [_mono(m, where + ".vanishing")
                  for m in _list(e.get("vanishing", []), where + ".vanishing")]
        reds = {}
        for j, pair in enumerate(_list(e.get("reductions", []),
                                       where + ".reductions")):
            p = _list(pair, "%s.reductions[%d]" % (where, j))
            if len(p) != 2:
                raise ParseError("%s.reductions[%d]: expected [monomial, "
                                 "polynomial]" % (where, j))
            reds[_mono(p[0], where + ".reductions")] = \
                parse_poly(p[1], where + ".reductions")
        ints = {}
        for j, pair in enumerate(_list(e.get("integrals"),
                                       where + ".integrals")):
            p = _list(pair, "%s.integrals[%d]" % (where, j))
            if len(p) != 2:
                raise ParseError("%s.integrals[%d]: expected [monomial, "
                                 "value]" % (where, j))
            ints[_mono(p[0], where + ".integrals")] = \
                _frac(p[1], where + ".integrals")
        weight = _frac(e.get("weight", 1), where + ".weight")
        specs.append(RingSpec(sector, k, subs, basis, vanish, reds, ints,
                              weight))
    return specs


def load_config_data(data: dict, where: str = "config") -> EngineConfig:
    data = _dict(data, where)
    schema = data.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise ParseError("%s: unsupported schema %r (this build reads %r)"
                         % (where, schema, SCHEMA))

    pres_data = _dict(data.get("presentation"), "presentation")
    rho = [_character(c, "presentation.rho")
           for c in _list(pres_data.get("rho"), "presentation.rho")]
    theta = _character(pres_data.get("theta"), "presentation.theta")
    tau = [_character(c, "presentation.tau")
           for c in _list(pres_data.get("tau", []), "presentation.tau")]
    presentation = GitPresentation(rho, theta, tau)
    report = validate_presentation(presentation)
    k = presentation.rank

    model = CohomologyModel(_load_rings(data.get("rings", []), k))
    declared = set(model.rings)
    for s in enumerate_sectors(presentation):
        if s not in declared:
            raise ValidationError(
                "sector %s appears in a stabilizer but has no ring" % s)

    generators = [_degree(g, "degree_generators")
                  for g in _list(data.get("degree_generators"),
                                 "degree_generators")]

    novikov = []
    insertion = set()
    for i, entry in enumerate(_list(data.get("novikov_coordinates", []),
                                    "novikov_coordinates")):
        where_n = "novikov_coordinates[%d]" % i
        e = _dict(entry, where_n)
        name = _str(e.get("name"), where_n + ".name")
        functional = tuple(_frac(x, where_n + ".functional")
                           for x in _list(e.get("functional"),
                                          where_n + ".functional"))
        gen = _degree(e.get("generator"), where_n + ".generator")
        nd = NovikovDirection(name, functional, gen)
        for g in generators:
            if nd.exponent(g).denominator != 1:
                raise ValidationError(
                    "coordinate %s has non-integer exponent %s on generator "
                    "%s" % (name, nd.exponent(g), g.coords))
        if e.get("insertion", False):
            insertion.add(name)
        novikov.append(nd)

    trunc_data = _dict(data.get("truncation"), "truncation")
    t_bound = _int(trunc_data.get("t_bound", 0), "truncation.t_bound")
    trunc = TruncationSpec(theta,
                           _frac(trunc_data.get("theta_bound"),
                                 "truncation.theta_bound"),
                           t_bound)

    entries = []
    tvar_names = []
    for i, entry in enumerate(_list(data.get("prefactor", []), "prefactor")):
        where_p = "prefactor[%d]" % i
        e = _dict(entry, where_p)
        name = _str(e.get("name", "t%d" % i), where_p + ".name")
        tvar_names.append(name)
        entries.append((i, parse_poly(e.get("poly"), where_p + ".poly")))
    prefactor = ExpPrefactorSpec(entries)
    tvars = len(entries)

    provider = TwistedClassProvider()
    notes = {}
    for i, entry in enumerate(_list(data.get("twisted_class_table", []),
                                    "twisted_class_table")):
        where_t = "twisted_class_table[%d]" % i
        e = _dict(entry, where_t)
        beta = _degree(e.get("degree"), where_t + ".degree")
        note = _str(e.get("note"), where_t + ".note")
        if not note.strip():
            raise ValidationError(
                "%s: table entries must carry a nonempty note saying where "
                "the class comes from" % where_t)
        cls = parse_class(e.get("class"), where_t + ".class", model)
        provider.table[beta] = cls
        provider.notes[beta] = note
        notes[beta] = note

    flow_data = data.get("flow", "auto")
    if flow_data == "auto":
        flow: str | MultiSeries = "auto"
    else:
        coeffs = {}
        for i, entry in enumerate(_list(flow_data, "flow")):
            e = _dict(entry, "flow[%d]" % i)
            beta = _degree(e.get("degree"), "flow[%d].degree" % i)
            m = tuple(_int(x, "flow[%d].t" % i)
                      for x in _list(e.get("t", [0] * tvars),
                                     "flow[%d].t" % i))
            c = _frac(e.get("coefficient"), "flow[%d].coefficient" % i)
            coeffs[(beta, m)] = ZLaurent({0: CRClass.from_poly(
                model.identity_sector(),
                {tuple(0 for _ in range(k)): c})})
        flow = MultiSeries(coeffs, trunc, tvars)

    products = []
    for i, entry in enumerate(_list(data.get("products", []), "products")):
        where_r = "products[%d]" % i
        e = _dict(entry, where_r)
        label = _str(e.get("label"), where_r + ".label")
        cls = parse_class(e.get("class"), where_r + ".class", model)
        direction = e.get("direction")
        if direction is not None:
            direction = _str(direction, where_r + ".direction")
        divisor = e.get("divisor_character")
        if divisor is not None:
            divisor = _character(divisor, where_r + ".divisor_character")
        products.append(ProductRequest(label, cls, direction, divisor))

    names = [_str(x, "generator_names")
             for x in _list(data.get("generator_names", []),
                            "generator_names")]
    if not names:
        names = ["H%d" % (j + 1) for j in range(k)]
    if len(names) != k:
        raise ValidationError("generator_names lists %d names for %d "
                              "generators" % (len(names), k))

    cfg = EngineConfig(presentation, report, model, provider, generators,
                       trunc, tvars, prefactor, tvar_names, novikov,
                       insertion, flow, products, names, notes)
    known = cfg.directions()
    for pr in products:
        if pr.direction is not None and pr.direction not in known:
            raise ValidationError("product %r names unknown direction %r"
                                  % (pr.label, pr.direction))
        if pr.direction is not None:
            d = known[pr.direction]
            if isinstance(d, NovikovDirection) \
                    and pr.direction not in insertion:
                raise ValidationError(
                    "product %r uses coordinate %r, which must be flagged "
                    "as an insertion" % (pr.label, pr.direction))
    return cfg


def load_config(path: str) -> EngineConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError("%s: %s" % (path, exc.strerror or exc)) from None
    except json.JSONDecodeError as exc:
        raise ParseError("%s: line %d: %s" % (path, exc.lineno, exc.msg)) \
            from None
    return load_config_data(data, path)
