"""Versioned JSON schemas ("monad-forge/1") and parsing with path-annotated
errors.  Rationals travel as "p/q" strings; all emitters round-trip exactly.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

from .convex import GenDownset, GenQuasiLens, GenUpset, gen_downset, gen_upset
from .errors import ForgeError, SchemaError
from .interp import ProgramAst, achoice, dchoice, echoice, pchoice, seq, step
from .poset import FinitePoset, PointSet, build_poset
from .prevision import Fork, SublinearPrevision, SuperlinearPrevision, sub_prevision, super_prevision
from .valuation import (
    KINDS,
    MonotoneMap,
    SimpleValuation,
    Valuation,
    monotone_map,
    simple_valuation,
    valuation,
)

SCHEMA = "monad-forge/1"


def parse_fraction(s, path="") -> Fraction:
    try:
        f = Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"not a rational: {s!r} ({exc})", path)
    return f


def format_fraction(f: Fraction) -> str:
    return str(f)


def _need(d: dict, key: str, path: str):
    if key not in d:
        raise SchemaError(f"missing key {key!r}", path)
    return d[key]


def check_schema_tag(d: dict, path: str = "") -> None:
    tag = d.get("schema")
    if tag is not None and tag != SCHEMA:
        raise SchemaError(f"unsupported schema {tag!r} (expected {SCHEMA!r})", path or "schema")


def load_json(path_or_dash: str):
    """Read JSON from a file path, or stdin when the path is '-'."""
    if path_or_dash == "-":
        return json.load(sys.stdin)
    with open(path_or_dash) as fh:
        return json.load(fh)


# --- poset -------------------------------------------------------------------


def parse_poset(d: dict, path: str = "poset") -> FinitePoset:
    check_schema_tag(d, path)
    elements = _need(d, "elements", path)
    leq = d.get("leq", [])
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise SchemaError("elements must be a list of strings", f"{path}.elements")
    pairs = []
    for i, pair in enumerate(leq):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError("leq entries are [below, above] pairs", f"{path}.leq[{i}]")
        pairs.append((pair[0], pair[1]))
    try:
        return build_poset(elements, pairs)
    except ForgeError as exc:
        raise SchemaError(str(exc), path) from exc


def poset_json(p: FinitePoset) -> dict:
    strict = sorted((a, b) for a, b in p.leq if a != b)
    return {"schema": SCHEMA, "elements": list(p.elements), "leq": [list(x) for x in strict]}


# --- valuations and maps -------------------------------------------------------


def parse_valuation(d: dict, p: FinitePoset, path: str = "valuation") -> Valuation:
    check_schema_tag(d, path)
    kind = d.get("kind", "general")
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}", f"{path}.kind")
    weights = _need(d, "weights", path)
    parsed = {x: parse_fraction(w, f"{path}.weights.{x}") for x, w in weights.items()}
    try:
        return valuation(p, parsed, kind)
    except ForgeError as exc:
        total = sum(parsed.values(), Fraction(0))
        raise SchemaError(f"{exc} (total {total})", path) from exc


def valuation_json(nu: Valuation) -> dict:
    return {
        "schema": SCHEMA,
        "kind": nu.kind,
        "weights": {x: format_fraction(w) for x, w in nu.weights},
    }


def parse_monotone_map(d: dict, p: FinitePoset, path: str = "h") -> MonotoneMap:
    check_schema_tag(d, path)
    values = _need(d, "values", path)
    parsed = {x: parse_fraction(v, f"{path}.values.{x}") for x, v in values.items()}
    try:
        return monotone_map(p, parsed)
    except ForgeError as exc:
        raise SchemaError(str(exc), path) from exc


def monotone_map_json(h: MonotoneMap) -> dict:
    return {"schema": SCHEMA, "values": {x: format_fraction(v) for x, v in h.values}}


# --- hyperspace elements and simple valuations ---------------------------------


def parse_element(d: dict, p: FinitePoset, path: str):
    """One atom body: {"upper": [...]}, {"lower": [...]}, {"Q":..,"C":..} or {"lens":[...]}."""
    if "upper" in d:
        e = frozenset(d["upper"])
        if not p.is_upper(e) or not e:
            raise SchemaError("not a nonempty upper set", f"{path}.upper")
        return "S", e
    if "lower" in d:
        e = frozenset(d["lower"])
        if not p.is_lower(e) or not e:
            raise SchemaError("not a nonempty lower set", f"{path}.lower")
        return "H", e
    if "Q" in d or "C" in d:
        q, c = frozenset(_need(d, "Q", path)), frozenset(_need(d, "C", path))
        from .hyperspace import validate_element

        try:
            validate_element("QL", p, (q, c))
        except ForgeError as exc:
            raise SchemaError(str(exc), path) from exc
        return "QL", (q, c)
    if "lens" in d:
        e = frozenset(d["lens"])
        if not p.is_order_convex(e):
            raise SchemaError("not a nonempty order-convex set", f"{path}.lens")
        return "Lens", e
    raise SchemaError("atom needs one of: upper, lower, Q/C, lens", path)


def parse_mu(d: dict, p: FinitePoset, path: str = "mu") -> tuple[str, SimpleValuation]:
    """A finite valuation over a hyperspace; returns (hyper kind, value)."""
    check_schema_tag(d, path)
    kind = d.get("kind", "general")
    atoms_json = _need(d, "atoms", path)
    if not atoms_json:
        return "S", simple_valuation([], kind)
    hyper = None
    atoms = []
    for i, atom in enumerate(atoms_json):
        w = parse_fraction(_need(atom, "weight", f"{path}.atoms[{i}]"), f"{path}.atoms[{i}].weight")
        hk, e = parse_element(atom, p, f"{path}.atoms[{i}]")
        if hyper is None:
            hyper = hk
        elif hyper != hk:
            raise SchemaError("atoms mix hyperspace kinds", f"{path}.atoms[{i}]")
        atoms.append((w, e))
    try:
        return hyper, simple_valuation(atoms, kind)
    except ForgeError as exc:
        raise SchemaError(str(exc), path) from exc


def element_json(hyper: str, e) -> dict:
    if hyper == "S":
        return {"upper": sorted(e)}
    if hyper == "H":
        return {"lower": sorted(e)}
    if hyper == "QL":
        return {"Q": sorted(e[0]), "C": sorted(e[1])}
    return {"lens": sorted(e)}


# --- generated convex sets and previsions --------------------------------------


def genset_json(s) -> dict:
    if isinstance(s, GenQuasiLens):
        return {
            "schema": SCHEMA,
            "type": "quasi-lens",
            "up": [valuation_json(g) for g in s.up.generators],
            "down": [valuation_json(g) for g in s.down.generators],
        }
    kind = "upset" if isinstance(s, GenUpset) else "downset"
    return {
        "schema": SCHEMA,
        "type": kind,
        "generators": [valuation_json(g) for g in s.generators],
    }


def parse_genset(d: dict, p: FinitePoset, path: str = "genset"):
    check_schema_tag(d, path)
    t = _need(d, "type", path)
    if t == "quasi-lens":
        up = [parse_valuation(g, p, f"{path}.up[{i}]") for i, g in enumerate(_need(d, "up", path))]
        down = [parse_valuation(g, p, f"{path}.down[{i}]")
                for i, g in enumerate(_need(d, "down", path))]
        return GenQuasiLens(gen_upset(up), gen_downset(down))
    gens = [parse_valuation(g, p, f"{path}.generators[{i}]")
            for i, g in enumerate(_need(d, "generators", path))]
    if t == "upset":
        return gen_upset(gens)
    if t == "downset":
        return gen_downset(gens)
    raise SchemaError(f"unknown generated-set type {t!r}", f"{path}.type")


def prevision_json(f) -> dict:
    if isinstance(f, Fork):
        return {
            "schema": SCHEMA,
            "role": "fork",
            "lower": prevision_json(f.lower),
            "upper": prevision_json(f.upper),
        }
    role = "superlinear" if isinstance(f, SuperlinearPrevision) else "sublinear"
    return {"schema": SCHEMA, "role": role,
            "generators": [valuation_json(g) for g in f.generators]}


def parse_prevision(d: dict, p: FinitePoset, path: str = "prevision"):
    check_schema_tag(d, path)
    role = _need(d, "role", path)
    if role == "fork":
        return Fork(parse_prevision(_need(d, "lower", path), p, f"{path}.lower"),
                    parse_prevision(_need(d, "upper", path), p, f"{path}.upper"))
    gens = [parse_valuation(g, p, f"{path}.generators[{i}]")
            for i, g in enumerate(_need(d, "generators", path))]
    if role == "superlinear":
        return super_prevision(gens)
    if role == "sublinear":
        return sub_prevision(gens)
    raise SchemaError(f"unknown prevision role {role!r}", f"{path}.role")


# --- programs -------------------------------------------------------------------


def parse_program(d: dict, p: FinitePoset, path: str = "program") -> ProgramAst:
    check_schema_tag(d, path)
    op = _need(d, "op", path)
    try:
        if op == "step":
            return step(dict(_need(d, "map", path)))
        if op == "pchoice":
            return pchoice(parse_fraction(_need(d, "p", path), f"{path}.p"),
                           parse_program(_need(d, "left", path), p, f"{path}.left"),
                           parse_program(_need(d, "right", path), p, f"{path}.right"))
        if op in ("dchoice", "achoice", "echoice", "seq"):
            left = parse_program(_need(d, "left", path), p, f"{path}.left")
            right = parse_program(_need(d, "right", path), p, f"{path}.right")
            ctor = {"dchoice": dchoice, "achoice": achoice, "echoice": echoice, "seq": seq}[op]
            return ctor(left, right)
    except SchemaError:
        raise
    except ForgeError as exc:
        raise SchemaError(str(exc), path) from exc
    raise SchemaError(f"unknown operator {op!r}", f"{path}.op")


def program_json(prog: ProgramAst) -> dict:
    if prog.op == "step":
        return {"op": "step", "map": dict(prog.map)}
    out = {"op": prog.op,
           "left": program_json(prog.left), "right": program_json(prog.right)}
    if prog.op == "pchoice":
        out["p"] = format_fraction(prog.p)
    return out


# --- models ----------------------------------------------------------------------


def parse_model(doc: dict) -> dict:
    """A model file: a poset plus optional named valuations/maps/previsions.

    Returns {"poset": ..., "valuations": {...}, "maps": {...}, "previsions": {...}}.
    """
    check_schema_tag(doc)
    if "poset" in doc:
        p = parse_poset(doc["poset"], "poset")
    else:
        p = parse_poset(doc, "poset")
    out = {"poset": p, "valuations": {}, "maps": {}, "previsions": {}}
    for name, v in doc.get("valuations", {}).items():
        out["valuations"][name] = parse_valuation(v, p, f"valuations.{name}")
    for name, h in doc.get("maps", {}).items():
        out["maps"][name] = parse_monotone_map(h, p, f"maps.{name}")
    for name, f in doc.get("previsions", {}).items():
        out["previsions"][name] = parse_prevision(f, p, f"previsions.{name}")
    return out
