"""JSON workspace files.

A file is ``{"format_version": 1, "objects": [...]}``.  Every object has a
``kind`` and a unique ``name``; objects refer to each other by name, in any
order.  Rationals are strings ``"p/q"`` (or ``"p"``), integers are also
accepted.  Sparse tables are lists of ``{"args": [...], "value": [...]}``
with 0-based indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .cohomology import Bivector
from .deform import DeformationFamily, EquivalencePair
from .errors import ParseError, ShapeMismatch, UnresolvedReference
from .exactla import Mat, format_rational, parse_rational
from .induce import BinaryTwistedOperator, TraceMap
from .nslie import NSLieAlgebra, ThreeNSLieAlgebra
from .structures import (
    LieAlgebra,
    Representation3,
    RepresentationLie,
    ThreeLieAlgebra,
    TwoCocycle3,
    TwoCocycleLie,
)
from .twistop import TwistedOperator

FORMAT_VERSION = 1

KINDS = (
    "lie",
    "3lie",
    "rep_lie",
    "rep3",
    "cocycle_lie",
    "cocycle3",
    "linmap",
    "trace",
    "twisted_op",
    "twisted_op_lie",
    "3ns",
    "ns",
    "deformation_family",
    "equivalence_pair",
)

# which fields of each kind name other objects
REFERENCES = {
    "rep_lie": ("algebra",),
    "rep3": ("algebra",),
    "cocycle_lie": ("algebra", "rep"),
    "cocycle3": ("algebra", "rep"),
    "trace": ("algebra",),
    "twisted_op": ("algebra", "rep", "cocycle"),
    "twisted_op_lie": ("algebra", "rep", "cocycle"),
    "deformation_family": ("operator",),
    "equivalence_pair": ("operator",),
}


@dataclass
class Entry:
    kind: str
    obj: Any
    refs: dict = field(default_factory=dict)


class Workspace:
    def __init__(self):
        self.entries: dict[str, Entry] = {}

    def __contains__(self, name):
        return name in self.entries

    def __len__(self):
        return len(self.entries)

    def names(self, kind: str | None = None) -> list[str]:
        return [n for n, e in self.entries.items() if kind is None or e.kind == kind]

    def entry(self, name: str, kinds=None) -> Entry:
        if name not in self.entries:
            raise UnresolvedReference(f"no object named {name!r}")
        e = self.entries[name]
        if kinds is not None:
            kinds = (kinds,) if isinstance(kinds, str) else tuple(kinds)
            if e.kind not in kinds:
                raise ParseError(f"object {name!r} has kind {e.kind!r}, expected one of {kinds}")
        return e

    def get(self, name: str, kinds=None):
        return self.entry(name, kinds).obj

    def add(self, name: str, kind: str, obj, refs: dict | None = None) -> None:
        if kind not in KINDS:
            raise ParseError(f"unknown kind {kind!r}")
        if name in self.entries:
            raise ParseError(f"duplicate object name {name!r}")
        for r in (refs or {}).values():
            if r not in self.entries:
                raise UnresolvedReference(f"{name!r} refers to unknown object {r!r}")
        self.entries[name] = Entry(kind, obj, dict(refs or {}))

    def fresh_name(self, stem: str) -> str:
        if stem not in self.entries:
            return stem
        i = 2
        while f"{stem}_{i}" in self.entries:
            i += 1
        return f"{stem}_{i}"

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "objects": [serialize_object(name, e) for name, e in self.entries.items()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def semantically_equal(self, other: "Workspace") -> bool:
        if list(self.entries) != list(other.entries):
            return False
        return all(
            self.entries[n].kind == other.entries[n].kind
            and self.entries[n].obj == other.entries[n].obj
            and self.entries[n].refs == other.entries[n].refs
            for n in self.entries
        )


# -- parsing ------------------------------------------------------------------


def _field(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _count(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ParseError(f"{where}: expected a non-negative integer, got {value!r}")
    return value


def _rationals(values, where: str) -> tuple:
    if not isinstance(values, list):
        raise ParseError(f"{where}: expected a list of rationals")
    try:
        return tuple(parse_rational(x) for x in values)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def _matrix(rows, where: str, shape: tuple | None = None) -> Mat:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{where}: matrix must be a list of rows")
    data = [_rationals(r, where) for r in rows]
    if shape is not None:
        if len(data) != shape[0] or any(len(r) != shape[1] for r in data):
            raise ShapeMismatch(f"{where}: matrix should be {shape[0]}x{shape[1]}")
        return Mat(shape[0], shape[1], data)
    if not data:
        raise ParseError(f"{where}: empty matrix needs explicit rows/cols")
    if any(len(r) != len(data[0]) for r in data):
        raise ShapeMismatch(f"{where}: ragged matrix")
    return Mat(len(data), len(data[0]), data)


def _args(entry, arity: int, where: str, rule: str) -> tuple:
    args = _field(entry, "args", where)
    if not isinstance(args, list) or len(args) != arity or not all(isinstance(i, int) and not isinstance(i, bool) for i in args):
        raise ParseError(f"{where}: args must be a list of {arity} integers")
    args = tuple(args)
    if rule == "increasing" and any(args[i] >= args[i + 1] for i in range(arity - 1)):
        raise ParseError(f"{where}: args {list(args)} must be strictly increasing")
    if rule == "pair_then_any" and args[0] >= args[1]:
        raise ParseError(f"{where}: first two args {list(args)} must be strictly increasing")
    return args


def _sparse(entries, arity: int, where: str, rule: str = "increasing", key: str = "value", scalar: bool = False) -> dict:
    if not isinstance(entries, list):
        raise ParseError(f"{where}: expected a list of {{args, {key}}} entries")
    out = {}
    for n, e in enumerate(entries):
        w = f"{where}[{n}]"
        if not isinstance(e, dict):
            raise ParseError(f"{w}: expected an object")
        args = _args(e, arity, w, rule)
        if args in out:
            raise ParseError(f"{w}: duplicate args {list(args)}")
        raw = _field(e, key, w)
        if scalar:
            try:
                out[args] = parse_rational(raw)
            except ParseError as exc:
                raise ParseError(f"{w}: {exc}") from None
        elif key == "matrix":
            out[args] = raw
        else:
            out[args] = _rationals(raw, w)
    return out


def _map_field(ws: Workspace, value, where: str, shape: tuple) -> Mat:
    if isinstance(value, str):
        m = ws.get(value, "linmap")
        if m.shape != shape:
            raise ShapeMismatch(f"{where}: map {value!r} has shape {m.shape}, expected {shape}")
        return m
    return _matrix(value, where, shape)


def _build(ws: Workspace, obj: dict, where: str):
    kind = obj["kind"]
    refs = {k: obj[k] for k in REFERENCES.get(kind, ()) if k in obj}
    for k in REFERENCES.get(kind, ()):
        if k not in obj:
            raise ParseError(f"{where}: missing reference field {k!r}")
        if not isinstance(obj[k], str):
            raise ParseError(f"{where}: reference {k!r} must be a name")
    if kind == "lie":
        dim = _count(_field(obj, "dim", where), where)
        return LieAlgebra(dim, _sparse(obj.get("brackets", []), 2, f"{where}.brackets")), refs
    if kind == "3lie":
        dim = _count(_field(obj, "dim", where), where)
        return ThreeLieAlgebra(dim, _sparse(obj.get("brackets", []), 3, f"{where}.brackets")), refs
    if kind in ("rep_lie", "rep3"):
        g = ws.get(refs["algebra"], "lie" if kind == "rep_lie" else "3lie")
        m = _count(_field(obj, "space_dim", where), where)
        arity = 1 if kind == "rep_lie" else 2
        ops = _sparse(obj.get("ops", []), arity, f"{where}.ops", key="matrix")
        ops = {k: _matrix(v, f"{where}.ops{list(k)}", (m, m)) for k, v in ops.items()}
        if kind == "rep_lie":
            return RepresentationLie(g.dim, m, {k[0]: v for k, v in ops.items()}), refs
        return Representation3(g.dim, m, ops), refs
    if kind in ("cocycle_lie", "cocycle3"):
        lie = kind == "cocycle_lie"
        g = ws.get(refs["algebra"], "lie" if lie else "3lie")
        rho = ws.get(refs["rep"], "rep_lie" if lie else "rep3")
        if rho.algebra_dim != g.dim:
            raise ShapeMismatch(f"{where}: representation is over a different algebra")
        vals = _sparse(obj.get("values", []), 2 if lie else 3, f"{where}.values")
        cls = TwoCocycleLie if lie else TwoCocycle3
        return cls(g.dim, rho.space_dim, vals), refs
    if kind == "linmap":
        rows = _count(_field(obj, "rows", where), where)
        cols = _count(_field(obj, "cols", where), where)
        return _matrix(_field(obj, "matrix", where), where, (rows, cols)), refs
    if kind == "trace":
        g = ws.get(refs["algebra"], ("lie", "ns"))
        tau = TraceMap(_rationals(_field(obj, "coeffs", where), where))
        if tau.dim != g.dim:
            raise ShapeMismatch(f"{where}: trace map has length {tau.dim}, algebra has dimension {g.dim}")
        return tau, refs
    if kind in ("twisted_op", "twisted_op_lie"):
        lie = kind == "twisted_op_lie"
        g = ws.get(refs["algebra"], "lie" if lie else "3lie")
        rho = ws.get(refs["rep"], "rep_lie" if lie else "rep3")
        theta = ws.get(refs["cocycle"], "cocycle_lie" if lie else "cocycle3")
        T = _map_field(ws, _field(obj, "map", where), f"{where}.map", (g.dim, rho.space_dim))
        cls = BinaryTwistedOperator if lie else TwistedOperator
        return cls(g, rho, theta, T), refs
    if kind == "3ns":
        dim = _count(_field(obj, "dim", where), where)
        curly = _sparse(obj.get("curly", []), 3, f"{where}.curly", rule="pair_then_any")
        double = _sparse(obj.get("bracket", []), 3, f"{where}.bracket")
        return ThreeNSLieAlgebra(dim, curly, double), refs
    if kind == "ns":
        dim = _count(_field(obj, "dim", where), where)
        curly = _sparse(obj.get("curly", []), 2, f"{where}.curly", rule="any")
        double = _sparse(obj.get("bracket", []), 2, f"{where}.bracket")
        for key in curly:
            if any(not 0 <= i < dim for i in key):
                raise ShapeMismatch(f"{where}: curly index out of range in {list(key)}")
        return NSLieAlgebra(dim, curly, double), refs
    if kind == "deformation_family":
        op = ws.get(refs["operator"], "twisted_op")
        terms = _field(obj, "terms", where)
        if not isinstance(terms, list):
            raise ParseError(f"{where}: terms must be a list")
        mats = tuple(_map_field(ws, t, f"{where}.terms[{i}]", op.T.shape) for i, t in enumerate(terms))
        return DeformationFamily(op, mats), refs
    if kind == "equivalence_pair":
        op = ws.get(refs["operator"], "twisted_op")
        X = Bivector(op.g_dim, _sparse(obj.get("X", []), 2, f"{where}.X", scalar=True))
        hp = tuple(_map_field(ws, m, f"{where}.higher_phi[{i}]", (op.g_dim, op.g_dim)) for i, m in enumerate(obj.get("higher_phi", [])))
        hs = tuple(_map_field(ws, m, f"{where}.higher_psi[{i}]", (op.v_dim, op.v_dim)) for i, m in enumerate(obj.get("higher_psi", [])))
        return EquivalencePair(X, hp, hs), refs
    raise ParseError(f"{where}: unknown kind {kind!r}")


def _dependencies(obj: dict) -> set:
    deps = {obj[k] for k in REFERENCES.get(obj.get("kind"), ()) if isinstance(obj.get(k), str)}
    for key in ("map",):
        if isinstance(obj.get(key), str):
            deps.add(obj[key])
    for key in ("terms", "higher_phi", "higher_psi"):
        for t in obj.get(key, []) if isinstance(obj.get(key), list) else []:
            if isinstance(t, str):
                deps.add(t)
    return deps


def parse_document(doc, ws: Workspace | None = None, source: str = "<input>") -> Workspace:
    """Add the objects of one parsed JSON document to a workspace."""
    ws = ws if ws is not None else Workspace()
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ParseError(f"{source}: unsupported format_version {doc.get('format_version')!r}")
    objs = doc.get("objects", [])
    if not isinstance(objs, list):
        raise ParseError(f"{source}: objects must be a list")
    pending = []
    seen = set(ws.entries)
    for n, obj in enumerate(objs):
        where = f"{source}: objects[{n}]"
        if not isinstance(obj, dict):
            raise ParseError(f"{where}: expected an object")
        name = _field(obj, "name", where)
        kind = _field(obj, "kind", where)
        if not isinstance(name, str) or not name:
            raise ParseError(f"{where}: name must be a non-empty string")
        if kind not in KINDS:
            raise ParseError(f"{where}: unknown kind {kind!r}")
        if name in seen:
            raise ParseError(f"{where}: duplicate object name {name!r}")
        seen.add(name)
        pending.append((f"{source}: {name}", obj))
    # resolve in dependency order; objects may appear in any order
    while pending:
        progressed = False
        rest = []
        for where, obj in pending:
            if _dependencies(obj) <= set(ws.entries):
                built, refs = _build(ws, obj, where)
                ws.add(obj["name"], obj["kind"], built, refs)
                progressed = True
            else:
                rest.append((where, obj))
        if not progressed:
            where, obj = rest[0]
            missing = sorted(_dependencies(obj) - set(ws.entries) - {o["name"] for _, o in rest})
            if missing:
                raise UnresolvedReference(f"{where}: unknown reference {missing[0]!r}")
            raise UnresolvedReference(f"{where}: circular references")
        pending = rest
    return ws


def loads(text: str, ws: Workspace | None = None, source: str = "<input>") -> Workspace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_document(doc, ws, source)


def parse_workspace(files) -> Workspace:
    ws = Workspace()
    for f in files:
        p = Path(f)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ParseError(f"{p}: cannot read ({exc.strerror})") from None
        loads(text, ws, str(p))
    return ws


# -- serialization ------------------------------------------------------------


def _q(x) -> str:
    return format_rational(x)


def _vec(v) -> list:
    return [_q(x) for x in v]


def _mat(m: Mat) -> list:
    return [_vec(r) for r in m.data]


def _table(t: dict) -> list:
    return [{"args": list(k), "value": _vec(v)} for k, v in sorted(t.items())]


def serialize_object(name: str, e: Entry) -> dict:
    obj = e.obj
    out: dict = {"kind": e.kind, "name": name}
    out.update(e.refs)
    if e.kind in ("lie", "3lie"):
        out.update(dim=obj.dim, brackets=_table(obj.table))
    elif e.kind == "rep_lie":
        out.update(space_dim=obj.space_dim, ops=[{"args": [k], "matrix": _mat(m)} for k, m in sorted(obj.ops.items())])
    elif e.kind == "rep3":
        out.update(space_dim=obj.space_dim, ops=[{"args": list(k), "matrix": _mat(m)} for k, m in sorted(obj.ops.items())])
    elif e.kind in ("cocycle_lie", "cocycle3"):
        out.update(values=_table(obj.values))
    elif e.kind == "linmap":
        out.update(rows=obj.rows, cols=obj.cols, matrix=_mat(obj))
    elif e.kind == "trace":
        out.update(coeffs=_vec(obj.coeffs))
    elif e.kind in ("twisted_op", "twisted_op_lie"):
        out.update(map=_mat(obj.T))
    elif e.kind == "3ns":
        out.update(dim=obj.dim, curly=_table(obj.curly), bracket=_table(obj.bracket))
    elif e.kind == "ns":
        out.update(dim=obj.dim, curly=_table(obj.curly), bracket=_table(obj.bracket))
    elif e.kind == "deformation_family":
        out.update(terms=[_mat(t) for t in obj.terms])
    elif e.kind == "equivalence_pair":
        out.update(
            X=[{"args": list(k), "value": _q(c)} for k, c in sorted(obj.X.coeffs.items())],
            higher_phi=[_mat(m) for m in obj.higher_phi],
            higher_psi=[_mat(m) for m in obj.higher_psi],
        )
    return out


def dumps(ws: Workspace) -> str:
    return ws.dumps()
