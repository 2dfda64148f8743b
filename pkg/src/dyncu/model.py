"""Model files (schema ``dyncu-model/1``) and LscFun literals."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import DyncuError, ModelError
from .lsc import LscFun, OpenSet
from .movers import PartialBijection, PrefixExchange
from .semigroup import ActionModel, Budgets
from .spaces import FiniteSpace, PathSpace

SCHEMA = "dyncu-model/1"


def _need(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ModelError(f"{where}: missing field '{key}'")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise ModelError(f"{where}.{key}: expected {kind.__name__}, got {type(v).__name__}")
    return v


def parse_space(d):
    kind = _need(d, "kind", "space", str)
    if kind == "finite":
        pts = _need(d, "points", "space", list)
        if not pts or not all(isinstance(p, str) for p in pts):
            raise ModelError("space.points: need a nonempty list of names")
        return FiniteSpace(tuple(pts))
    if kind == "path":
        verts = _need(d, "vertices", "space", list)
        edges = []
        for i, e in enumerate(_need(d, "edges", "space", list)):
            if isinstance(e, dict):
                e = [e.get("name"), e.get("source"), e.get("range")]
            if not (isinstance(e, list) and len(e) == 3 and all(isinstance(x, str) for x in e)):
                raise ModelError(f"space.edges[{i}]: expected [name, source, range]")
            edges.append(tuple(e))
        return PathSpace(tuple(verts), tuple(edges))
    raise ModelError(f"space.kind: unknown kind {kind!r}")


def parse_generator(space, g, i, modulus):
    where = f"generators[{i}]"
    name = _need(g, "name", where, str)
    typ = _need(g, "type", where, str)
    try:
        if typ == "partial_bijection":
            if not isinstance(space, FiniteSpace):
                raise ModelError(f"{where}: partial bijections need a finite space")
            mp = _need(g, "map", where, dict)
            table = tuple((space.index(x), space.index(y)) for x, y in mp.items())
            tag = g.get("tag", 0)
            if not isinstance(tag, int):
                raise ModelError(f"{where}.tag: expected int")
            return PartialBijection(space, table, tag, modulus, name)
        if typ == "prefix_exchange":
            if not isinstance(space, PathSpace):
                raise ModelError(f"{where}: prefix exchanges need a path space")
            q = space.check_word(_need(g, "from", where, str))
            p = space.check_word(_need(g, "to", where, str))
            restrict = None
            if "restrict" in g:
                restrict = OpenSet.parse(space, g["restrict"])
            return PrefixExchange(space, q, p, restrict, name)
    except ModelError as exc:
        if str(exc).startswith(where):
            raise
        raise ModelError(f"{where}: {exc}") from None
    raise ModelError(f"{where}.type: unknown generator type {typ!r}")


def parse_lsc(space, obj) -> LscFun:
    """Accepts a value list, {"values": [...]}, {"cylinders": [{"word", "value"}]}
    or a {word: value} mapping. ``"X"`` or ``"1"`` means the constant 1."""
    try:
        if isinstance(obj, str):
            s = obj.strip()
            if s in ("X", "1_X"):
                return LscFun.constant(space, 1)
            obj = json.loads(s)
        if isinstance(obj, list):
            if isinstance(space, FiniteSpace):
                return LscFun.from_values(space, obj)
            return LscFun.from_cylinders(space, [(c["word"], c["value"]) for c in obj])
        if isinstance(obj, dict):
            if "values" in obj:
                return LscFun.from_values(space, obj["values"])
            if "cylinders" in obj:
                return LscFun.from_cylinders(space, [(c["word"], c["value"]) for c in obj["cylinders"]])
            if isinstance(space, FiniteSpace):
                vals = [0] * len(space)
                for p, v in obj.items():
                    vals[space.index(p)] = v
                return LscFun.from_values(space, vals)
            return LscFun.from_cylinders(space, list(obj.items()))
    except (ValueError, KeyError, TypeError) as exc:
        raise ModelError(f"bad function literal: {exc}") from None
    raise ModelError(f"bad function literal: {obj!r}")


def model_from_dict(d: dict, name="model") -> ActionModel:
    if not isinstance(d, dict):
        raise ModelError("top level: expected an object")
    schema = d.get("schema")
    if schema != SCHEMA:
        raise ModelError(f"schema: expected {SCHEMA!r}, got {schema!r}")
    try:
        space = parse_space(_need(d, "space", "top level", dict))
        modulus = d.get("isotropy_order", 1)
        if not isinstance(modulus, int) or modulus < 1:
            raise ModelError("isotropy_order: expected a positive int")
        gens = [parse_generator(space, g, i, modulus)
                for i, g in enumerate(_need(d, "generators", "top level", list))]
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ModelError("generators: duplicate names")
        budgets = Budgets()
        if "budgets" in d:
            b = d["budgets"]
            if not isinstance(b, dict):
                raise ModelError("budgets: expected an object")
            try:
                budgets = Budgets.parse(",".join(f"{k}={v}" for k, v in b.items()), budgets)
            except ValueError as exc:
                raise ModelError(f"budgets: {exc}") from None
        unit = parse_lsc(space, d["unit"]) if "unit" in d else None
        if unit is not None and (unit.is_zero() or not unit.is_finite()):
            raise ModelError("unit: must be finite-valued and nonzero")
        samples = [parse_lsc(space, s) for s in d.get("samples", [])]
    except ModelError:
        raise
    except (DyncuError, ValueError) as exc:
        raise ModelError(str(exc)) from None
    return ActionModel(space, gens, budgets, modulus, d.get("name", name), unit, samples)


def load_model(path) -> ActionModel:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelError(f"{path}: {exc.strerror}") from None
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return model_from_dict(d, name=path.stem)


def model_to_dict(model: ActionModel) -> dict:
    sp = model.space
    if isinstance(sp, FiniteSpace):
        space = {"kind": "finite", "points": list(sp.points)}
    else:
        space = {"kind": "path", "vertices": list(sp.vertices), "edges": [list(e) for e in sp.edges]}
    gens = []
    for g in model.generators:
        gens.append({"name": g.name, **g.describe()})
    d = {"schema": SCHEMA, "name": model.name, "space": space, "generators": gens,
         "budgets": model.budgets.to_json()}
    if model.modulus > 1:
        d["isotropy_order"] = model.modulus
    if model.unit_element is not None:
        d["unit"] = model.unit_element.to_json()
    return d
