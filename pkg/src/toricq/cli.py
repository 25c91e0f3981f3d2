"""Command line driver: config in, deterministic text/csv/json out.

Exit codes: 0 success, 2 for configuration or usage problems, 3 when a
computation refuses to proceed. All rationals print exactly; series lines
are sorted by grading, then degree, then t exponents, so identical inputs
give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .config import (EngineConfig, class_to_json, load_config,
                     series_to_json)
from .errors import EngineError, ParseError, ValidationError
from .ifunction import IFunctionEngine
from .mirror import (DivisorDirection, ProductEntry, auto_flow, mirror_map,
                     normalize_frame, plus_check, product_table,
                     quantum_product)
from .presentation import Degree, degree_pairing, enumerate_effective
from .series import NovikovDirection, TruncationSpec

COMMANDS = ("validate", "sectors", "effective", "ifun", "mirror-map",
            "qproduct", "table", "plus-check")


# -- rendering ----------------------------------------------------------------

def _mono_text(mono, names) -> str:
    pieces = []
    for j, e in enumerate(mono):
        if e == 1:
            pieces.append(names[j])
        elif e:
            pieces.append("%s^%d" % (names[j], e))
    return " ".join(pieces) if pieces else "1"


def _class_pieces(cl, names, prefix: str = "") -> list[str]:
    pieces = []
    for s, sc in cl.parts:
        sector = "" if s.is_identity() else "[sector %s] " % s
        for mono, c in sc.coeffs:
            body = prefix + sector + _mono_text(mono, names)
            pieces.append(body if c == 1 else "(%s) %s" % (c, body))
    return pieces


def _class_text(cl, names) -> str:
    pieces = _class_pieces(cl, names)
    return " + ".join(pieces) if pieces else "0"


def _z_prefix(e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return "z * "
    if e > 1:
        return "z^%d * " % e
    if e == -1:
        return "1/z * "
    return "1/z^%d * " % -e


def _zl_text(zl, names) -> str:
    if zl.is_zero():
        return "0"
    out = []
    for e in sorted(zl.terms, reverse=True):
        text = _class_text(zl.terms[e], names)
        if e != 0 and " + " in text:
            text = "(" + text + ")"
        out.append(_z_prefix(e) + text)
    return " + ".join(out)


def _degree_monomial(beta: Degree, cfg: EngineConfig) -> str:
    if beta.is_zero():
        return ""
    if not cfg.novikov:
        return "deg(%s)" % ",".join(str(c) for c in beta.coords)
    pieces = []
    for nd in cfg.novikov:
        e = nd.exponent(beta)
        if e == 0:
            continue
        if e == 1:
            pieces.append(nd.name)
        elif e.denominator == 1:
            pieces.append("%s^%d" % (nd.name, e))
        else:
            pieces.append("%s^(%s)" % (nd.name, e))
    return " ".join(pieces)


def _key_label(key, cfg: EngineConfig) -> str:
    beta, m = key
    pieces = []
    deg = _degree_monomial(beta, cfg)
    if deg:
        pieces.append(deg)
    for i, e in enumerate(m):
        name = cfg.tvar_names[i] if i < len(cfg.tvar_names) else "t%d" % i
        if e == 1:
            pieces.append(name)
        elif e:
            pieces.append("%s^%d" % (name, e))
    return " ".join(pieces) if pieces else "1"


def _key_sort(cfg: EngineConfig):
    theta = cfg.presentation.theta

    def key(k):
        beta, m = k
        return (degree_pairing(beta, theta), beta.sort_key(), m)

    return key


def _series_lines(series, cfg: EngineConfig) -> list[str]:
    lines = []
    for key in sorted(series.coeffs, key=_key_sort(cfg)):
        lines.append("%s: %s" % (_key_label(key, cfg),
                                 _zl_text(series.coeffs[key],
                                          cfg.generator_names)))
    return lines


def _product_text(result: dict, cfg: EngineConfig) -> str:
    pieces = []
    for beta in sorted(result, key=lambda b: b.sort_key()):
        deg = _degree_monomial(beta, cfg)
        prefix = deg + " " if deg else ""
        pieces.extend(_class_pieces(result[beta], cfg.generator_names,
                                    prefix))
    return " + ".join(pieces) if pieces else "0"


def _product_json(result: dict) -> list:
    return [{"degree": [str(c) for c in beta.coords],
             "class": class_to_json(result[beta])}
            for beta in sorted(result, key=lambda b: b.sort_key())]


# -- shared pipeline ----------------------------------------------------------

def _engine(cfg: EngineConfig) -> IFunctionEngine:
    return IFunctionEngine(cfg.presentation, cfg.model, cfg.provider,
                           cfg.generators)


def _trunc(cfg: EngineConfig, order) -> TruncationSpec:
    bound = cfg.trunc.theta_bound if order is None else Fraction(order)
    return TruncationSpec(cfg.presentation.theta, bound, cfg.trunc.t_bound)


def _big_i(cfg: EngineConfig, order):
    return _engine(cfg).big_I(_trunc(cfg, order), cfg.prefactor, cfg.tvars)


def _frame(cfg: EngineConfig, order):
    series = _big_i(cfg, order)
    mm = mirror_map(series, cfg.model)
    if cfg.flow == "auto":
        flow = auto_flow(mm, cfg.model)
        print("flow (auto): %s"
              % ("; ".join(_series_lines(flow, cfg)) or "0"),
              file=sys.stderr)
    else:
        flow = cfg.flow
    return normalize_frame(series, flow, cfg.model, cfg.frame_directions())


def _resolve_direction(cfg: EngineConfig, name: str, experimental: bool):
    dirs = cfg.directions()
    if name not in dirs:
        raise ValidationError("unknown direction %r; declared: %s"
                              % (name, ", ".join(sorted(dirs)) or "none"))
    d = dirs[name]
    if isinstance(d, DivisorDirection) and not experimental:
        raise ValidationError(
            "direction %r is a divisor direction; pass "
            "--experimental-divisor to enable it" % name)
    return d


def _parse_at(pairs) -> dict:
    out = {}
    for raw in pairs or []:
        name, sep, value = raw.partition("=")
        if not sep or not name:
            raise ParseError("--at expects NAME=VALUE, got %r" % raw)
        try:
            out[name] = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError("--at %s: bad value %r" % (name, value)) \
                from None
    return out


def _emit_json(payload: dict) -> str:
    body = {"schema": "engine/1"}
    body.update(payload)
    return json.dumps(body, indent=2)


def _only_text(fmt: str, command: str):
    if fmt == "csv":
        raise ParseError("csv output is only available for table, "
                         "not %s" % command)


# -- commands -----------------------------------------------------------------

def _cmd_validate(cfg, args):
    lines = list(cfg.report.lines())
    lines.append("sector rings: %s"
                 % ", ".join(str(s) for s in sorted(cfg.model.rings,
                                                    key=lambda s: s.coords)))
    for beta in sorted(cfg.table_notes, key=lambda b: b.sort_key()):
        lines.append("table entry %s: %s"
                     % (_degree_monomial(beta, cfg)
                        or ",".join(str(c) for c in beta.coords),
                        cfg.table_notes[beta]))
    lines.append("configuration ok")
    if args.format == "json":
        return _emit_json({"command": "validate", "lines": lines}), 0
    _only_text(args.format, "validate")
    return "\n".join(lines), 0


def _cmd_sectors(cfg, args):
    from .presentation import enumerate_sectors
    sectors = [str(s) for s in enumerate_sectors(cfg.presentation)]
    if args.format == "json":
        return _emit_json({"command": "sectors", "sectors": sectors}), 0
    _only_text(args.format, "sectors")
    return "\n".join(sectors), 0


def _cmd_effective(cfg, args):
    bound = cfg.trunc.theta_bound if args.bound is None \
        else Fraction(args.bound)
    degrees = enumerate_effective(cfg.presentation, cfg.generators, bound)
    labels = [_degree_monomial(b, cfg) or "0" for b in degrees]
    if args.format == "json":
        return _emit_json({
            "command": "effective",
            "degrees": [{"degree": [str(c) for c in b.coords],
                         "label": lab}
                        for b, lab in zip(degrees, labels)]}), 0
    _only_text(args.format, "effective")
    return "\n".join(labels), 0


def _cmd_ifun(cfg, args):
    series = _big_i(cfg, args.order)
    if args.format == "json":
        return _emit_json({"command": "ifun", "t_variables": cfg.tvars,
                           "series": series_to_json(series)}), 0
    _only_text(args.format, "ifun")
    return "\n".join(_series_lines(series, cfg)), 0


def _cmd_mirror_map(cfg, args):
    mm = mirror_map(_big_i(cfg, args.order), cfg.model)
    if args.format == "json":
        return _emit_json({"command": "mirror-map",
                           "t_variables": cfg.tvars,
                           "series": series_to_json(mm.mu)}), 0
    _only_text(args.format, "mirror-map")
    return "\n".join(_series_lines(mm.mu, cfg)) or "0", 0


def _cmd_plus_check(cfg, args):
    series = _big_i(cfg, args.order)
    mm = mirror_map(series, cfg.model)
    report = plus_check(series, mm, cfg.model)
    lines = []
    for e in report.entries:
        label = _key_label(e.key, cfg)
        if e.ok:
            lines.append("ok %s" % label)
        else:
            lines.append("mismatch %s: got %s, want %s"
                         % (label, _zl_text(e.got, cfg.generator_names),
                            _zl_text(e.want, cfg.generator_names)))
    bad = sum(1 for e in report.entries if not e.ok)
    lines.append("all plus checks passed" if not bad
                 else "%d mismatches" % bad)
    code = 0 if report.ok else 3
    if args.format == "json":
        return _emit_json({
            "command": "plus-check", "ok": report.ok,
            "entries": [{"key": _key_label(e.key, cfg), "ok": e.ok}
                        for e in report.entries]}), code
    _only_text(args.format, "plus-check")
    return "\n".join(lines), code


def _cmd_qproduct(cfg, args):
    if not args.a or not args.b:
        raise ParseError("qproduct needs --a and --b")
    da = _resolve_direction(cfg, args.a, args.experimental_divisor)
    db = _resolve_direction(cfg, args.b, args.experimental_divisor)
    frame = _frame(cfg, args.order)
    result = quantum_product(frame, da, db, _parse_at(args.at))
    warnings = []
    if isinstance(da, DivisorDirection) or isinstance(db, DivisorDirection):
        warnings.append("experimental: divisor-direction products have no "
                        "independent cross-check on twisted degrees")
    if args.format == "json":
        return _emit_json({"command": "qproduct", "a": args.a, "b": args.b,
                           "warnings": warnings,
                           "product": _product_json(result)}), 0
    _only_text(args.format, "qproduct")
    lines = ["# %s" % w for w in warnings]
    lines.append(_product_text(result, cfg))
    return "\n".join(lines), 0


def _table_entries(cfg: EngineConfig) -> list[ProductEntry]:
    if not cfg.products:
        raise ValidationError("the config declares no product basis")
    dirs = cfg.directions()
    entries = []
    for pr in cfg.products:
        if pr.divisor_character is not None:
            d = dirs[pr.label]
        elif pr.direction is not None:
            d = dirs[pr.direction]
        else:
            d = None
        entries.append(ProductEntry(pr.label, pr.cls, d))
    return entries


def _cmd_table(cfg, args):
    frame = _frame(cfg, args.order)
    entries = _table_entries(cfg)
    pt = product_table(frame, entries, args.experimental_divisor)

    def cell_text(cell):
        if cell.status != "ok":
            return "n/a (%s)" % cell.note
        return _product_text(cell.value, cfg)

    if args.format == "json":
        cells = [[{"status": c.status, "note": c.note,
                   "value": None if c.value is None
                   else _product_json(c.value)}
                  for c in row] for row in pt.cells]
        return _emit_json({"command": "table", "labels": pt.labels,
                           "warnings": pt.warnings, "cells": cells}), 0
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + pt.labels)
        for label, row in zip(pt.labels, pt.cells):
            writer.writerow([label] + [cell_text(c) for c in row])
        return buf.getvalue().rstrip("\n"), 0
    lines = ["# %s" % w for w in pt.warnings]
    for label, row in zip(pt.labels, pt.cells):
        for other, cell in zip(pt.labels, row):
            lines.append("(%s, %s): %s" % (label, other, cell_text(cell)))
    return "\n".join(lines), 0


_DISPATCH = {
    "validate": _cmd_validate,
    "sectors": _cmd_sectors,
    "effective": _cmd_effective,
    "ifun": _cmd_ifun,
    "mirror-map": _cmd_mirror_map,
    "qproduct": _cmd_qproduct,
    "table": _cmd_table,
    "plus-check": _cmd_plus_check,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="engine",
        description="exact I-function and quantum product calculator")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True,
                        help="path to a JSON configuration")
    parser.add_argument("--order", default=None,
                        help="override the grading bound of the truncation")
    parser.add_argument("--format", default="text",
                        choices=("text", "csv", "json"))
    parser.add_argument("--a", default=None, help="first product direction")
    parser.add_argument("--b", default=None, help="second product direction")
    parser.add_argument("--at", action="append", default=[],
                        metavar="NAME=VALUE",
                        help="evaluate a direction (only 0 is supported)")
    parser.add_argument("--bound", default=None,
                        help="grading bound for the effective listing")
    parser.add_argument("--experimental-divisor", action="store_true",
                        help="enable divisor directions in products")
    args = parser.parse_args(argv)

    try:
        try:
            cfg = load_config(args.config)
            if args.order is not None:
                Fraction(args.order)
        except (ValueError, ZeroDivisionError):
            raise ParseError("--order: bad rational %r" % args.order) \
                from None
        out, code = _DISPATCH[args.command](cfg, args)
    except (ParseError, ValidationError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except EngineError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
