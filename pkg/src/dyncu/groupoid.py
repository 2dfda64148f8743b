"""Orbit structure and the hypothesis checks: minimality, topological
freeness, closedness, and covering numbers."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ContractError
from .extnat import INF as _INF
from .lsc import LscFun, OpenSet, atoms_of, lsc_leq, lsc_sum, union
from .movers import PrefixExchange, natural_leq
from .semigroup import ActionModel, closure, ideal_support

YES, NO, UNKNOWN = "Yes", "No", "Unknown"


@dataclass
class GateResult:
    status: str
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        return {"status": self.status, "evidence": self.evidence}


# -- orbits -------------------------------------------------------------------


def finite_orbits(model: ActionModel):
    """Orbits of a finite model as sorted lists of point indices."""
    n = len(model.space)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in model.generators:
        for x, y in g.table:
            parent[find(x)] = find(y)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def working_cells(model: ActionModel, depth=None):
    """Canonical cylinders partitioning X at the working depth."""
    sp = model.space
    d = model.budgets.depth if depth is None else depth
    seen, out = set(), []
    for w in sp.words(d):
        c = sp.canonical(w)
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


@dataclass
class OrbitGraph:
    nodes: list
    edges: list  # (src, dst, mover name)

    def to_dot(self, name="orbits") -> str:
        lines = [f"digraph {_dot_id(name)} {{"]
        for v in self.nodes:
            lines.append(f"  {_dot_id(v)};")
        for a, b, lab in self.edges:
            lines.append(f"  {_dot_id(a)} -> {_dot_id(b)} [label={_dot_id(lab)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_id(s) -> str:
    s = str(s).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{s}"'


def orbit_graph(model: ActionModel) -> OrbitGraph:
    S = model.semigroup
    if model.is_finite:
        pts = model.space.points
        edges = {}
        for s in S.nonzero():
            for x, y in s.table:
                if x != y and (x, y) not in edges:
                    edges[(x, y)] = s.name
        return OrbitGraph(list(pts), sorted((pts[x], pts[y], n) for (x, y), n in edges.items()))
    cells = working_cells(model)
    label = {c: "Z(" + (c or "ε") + ")" for c in cells}
    edges = {}
    for s in S.nonzero():
        for c in cells:
            img = s.image(OpenSet.from_atoms(model.space, [c]))
            if img.is_empty():
                continue
            for c2 in cells:
                if c2 != c and (c, c2) not in edges and not (img & OpenSet.from_atoms(model.space, [c2])).is_empty():
                    edges[(c, c2)] = s.name
    return OrbitGraph([label[c] for c in cells],
                      sorted((label[a], label[b], n) for (a, b), n in edges.items()))


# -- minimality ---------------------------------------------------------------


def is_minimal(model: ActionModel) -> GateResult:
    if model.is_finite:
        orbits = finite_orbits(model)
        if len(orbits) == 1:
            return GateResult(YES, {"orbits": 1})
        W = OpenSet.from_atoms(model.space, orbits[0])
        return GateResult(NO, {"orbits": len(orbits), "invariant_set": W.to_json()})
    S = model.semigroup
    sp = model.space
    cells = working_cells(model)
    elems = S.nonzero()
    for target in cells:
        Z = OpenSet.from_atoms(sp, [target])
        pre = union(*[s.inverse().image(Z & s.ran()) for s in elems])
        for c in cells:
            if not OpenSet.from_atoms(sp, [c]) <= pre:
                ev = {"from": c, "unreached": target, "depth": model.budgets.depth,
                      "len": model.budgets.len, "saturated": S.saturated}
                if S.saturated:
                    Zc = OpenSet.from_atoms(sp, [c])
                    ev["invariant_set"] = union(*[s.image(Zc) for s in elems]).to_json()
                    return GateResult(NO, ev)
                return GateResult(UNKNOWN, ev)
    return GateResult(YES, {"cells": len(cells), "depth": model.budgets.depth,
                            "len": model.budgets.len, "saturated": S.saturated,
                            "note": "cylinder-level reachability at the working depth"})


# -- topological freeness -----------------------------------------------------


@dataclass
class GermIsotropyRecord:
    point: object
    mover: str
    trivialized: bool
    by: str | None = None

    def to_json(self):
        return {"point": self.point, "mover": self.mover, "trivialized": self.trivialized, "by": self.by}


def rigid_vertices(space) -> set:
    """Vertices with exactly one infinite path leaving them."""
    out = {v: [r for n, s, r in space.edges if s == v] for v in space.vertices}
    rigid = set()
    for v in space.vertices:
        seen, stack, ok = set(), [v], True
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            if len(out[u]) != 1:
                ok = False
                break
            stack.extend(out[u])
        if ok:
            rigid.add(v)
    return rigid


def _fixed_isolated_point(s: PrefixExchange, rigid):
    """The isolated fixed point of a non-idempotent prefix exchange, if any.

    A fixed point of ``q -> q u`` is ``q u u u ...``; it is isolated exactly when
    the cycle ``u`` runs through rigid vertices.  Returned as a literal word
    long enough to name the point's singleton cylinder.
    """
    sp = s.space
    q, p = s.q, s.p
    if len(p) < len(q):
        q, p = p, q
    if len(p) == len(q) or not p.startswith(q):
        return None
    u = p[len(q):]
    word = q + u * (len(sp.vertices) + 2)
    if not sp.is_path(word):
        return None
    if sp.end(word) not in rigid:
        return None
    if s.apply_word(word) is None:
        return None
    return word


def isotropy_records(model: ActionModel):
    S = model.semigroup
    idem = S.idempotents()
    recs = []
    if model.is_finite:
        pts = model.space.points
        for s in S.nonzero():
            for x in s.fixed_atoms():
                by = next((e.name for e in idem if e.dom().contains(x) and natural_leq(e, s)), None)
                recs.append(GermIsotropyRecord(pts[x], s.name, by is not None, by))
        return recs
    rigid = rigid_vertices(model.space)
    for s in S.nonzero():
        if s.is_idempotent():
            continue
        w = _fixed_isolated_point(s, rigid)
        if w is None:
            continue
        by = next((e.name for e in idem if e.dom().contains(w) and natural_leq(e, s)), None)
        recs.append(GermIsotropyRecord(model.space.canonical(w), s.name, by is not None, by))
    return recs


def is_topologically_free(model: ActionModel) -> GateResult:
    recs = isotropy_records(model)
    bad = [r for r in recs if not r.trivialized]
    S = model.semigroup
    if model.is_finite:
        if bad:
            return GateResult(NO, {"violation": bad[0].to_json(), "records": len(recs)})
        return GateResult(YES, {"records": len(recs)})
    rigid = rigid_vertices(model.space)
    if not rigid:
        return GateResult(YES, {"isolated_points": False,
                                "note": "no isolated points, so no mover fixes an open set pointwise"})
    if bad:
        ev = {"violation": bad[0].to_json(), "saturated": S.saturated, "len": model.budgets.len}
        return GateResult(NO if S.saturated else UNKNOWN, ev)
    if S.saturated:
        return GateResult(YES, {"records": len(recs), "saturated": True})
    return GateResult(UNKNOWN, {"records": len(recs), "saturated": False, "len": model.budgets.len})


# -- closedness ---------------------------------------------------------------


def is_closed_action(model: ActionModel) -> GateResult:
    if model.is_finite:
        return GateResult(YES, {"note": "discrete base space"})
    S = model.semigroup
    if not rigid_vertices(model.space):
        return GateResult(YES, {"note": "no isolated points: each O_{s,1} is empty or dom(s), both clopen"})
    if S.saturated:
        return GateResult(YES, {"note": "finite semigroup: every O_{s,1} is a finite union of cylinders",
                                "saturated": True})
    bigger = closure(model.generators, model.space, model.budgets.len + 1, model.modulus)
    for s in S.nonzero():
        if ideal_support(s, S) != ideal_support(s, bigger):
            return GateResult(UNKNOWN, {"mover": s.name, "note": "ideal support still growing with the budget",
                                        "len": model.budgets.len})
    return GateResult(YES, {"note": "ideal supports stable between len and len+1", "len": model.budgets.len})


# -- covering numbers ---------------------------------------------------------


@dataclass
class Cover:
    m: int
    movers: list  # mover objects, with repetition
    pieces: list  # z_i = y restricted to dom(s_i)

    def to_json(self):
        return {"m": self.m, "cover": [{"mover": s.name, "piece": z.to_json()} for s, z in zip(self.movers, self.pieces)]}


def covering_number(x: LscFun, y: LscFun, model: ActionModel, m_max=16):
    """Least m with x <= sum_i s_i(z_i), z_i <= y, found within budget.

    Returns ``(GateResult, Cover | None)``.
    """
    if y.is_zero():
        raise ContractError("covering number needs y != 0")
    if not x.is_finite():
        raise ContractError("covering number needs finite-valued x")
    S = model.semigroup
    cands, seen = [], set()
    for s in S.nonzero():
        z = _restrict(y, s)
        g = s.push(z)
        if g.is_zero() or g in seen:
            continue
        seen.add(g)
        cands.append((s, z, g))
    atoms = atoms_of(x, *[g for _, _, g in cands]) if cands else atoms_of(x)
    demand0 = tuple(x.at(a) for a in atoms)
    vec = [tuple(g.at(a) for a in atoms) for _, _, g in cands]
    order = sorted(range(len(atoms)), key=lambda i: (-_depth(atoms[i]), atoms[i]))

    def search(demand, left, start_hint, chosen):
        i = next((i for i in order if demand[i] > 0), None)
        if i is None:
            return chosen
        if left == 0:
            return None
        for j, v in enumerate(vec):
            if v[i] == 0:
                continue
            nd = tuple(max(d - c, 0) if c is not _INF else 0 for d, c in zip(demand, v))
            r = search(nd, left - 1, j, chosen + [j])
            if r is not None:
                return r
        return None

    for m in range(0, m_max + 1):
        res = search(demand0, m, 0, [])
        if res is not None:
            cover = Cover(len(res), [cands[j][0] for j in res], [cands[j][1] for j in res])
            total = lsc_sum([s.push(z) for s, z in zip(cover.movers, cover.pieces)], x.space)
            assert lsc_leq(x, total)
            return GateResult(YES, {"m": cover.m}), cover
    return GateResult(UNKNOWN, {"m_max": m_max, "len": model.budgets.len}), None


def _restrict(F: LscFun, s) -> LscFun:
    D = s.dom()
    return LscFun.from_pairs(F.space, [(a, F.at(a)) for a in atoms_of(F, D) if D.contains(a)])


def _depth(atom):
    return len(atom) if isinstance(atom, str) else 0
