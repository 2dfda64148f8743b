"""Dynamical subequivalence F ≼ H: transport witnesses, decisions, and the
brute-force oracle used to cross-check the search."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import networkx as nx

from .errors import ContractError, InconsistencyError, ModelError
from .extnat import INF, dump
from .groupoid import finite_orbits
from .lsc import (LscFun, OpenSet, almost_refinement, atoms_of, first_violation, lsc_leq,
                  lsc_sum, normal_form)
from .movers import identity_mover
from .semigroup import ActionModel, Budgets
from .states import StateWitness, frac_str, separating_state

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WitnessEntry:
    piece: OpenSet
    mover: object
    mult: object  # positive int or INF

    def to_json(self):
        return {"piece": self.piece.to_json(), "mover": self.mover.name, "mult": dump(self.mult)}


@dataclass
class TransportWitness:
    entries: list = field(default_factory=list)

    def coverage(self, space) -> LscFun:
        return lsc_sum([e.piece.indicator(e.mult) for e in self.entries], space)

    def images(self, space) -> LscFun:
        return lsc_sum([e.mover.image(e.piece).indicator(e.mult) for e in self.entries], space)

    def movers(self) -> dict:
        return {e.mover.name: e.mover.describe() for e in self.entries}

    def to_json(self):
        return [e.to_json() for e in self.entries]

    def __add__(self, other):
        return TransportWitness(self.entries + other.entries)


@dataclass
class Verification:
    ok: bool
    failure: str | None = None

    def __bool__(self):
        return self.ok


def _where(space, atom):
    if isinstance(atom, int):
        return space.points[atom]
    return f"Z({atom or 'ε'})"


def apply_witness(w: TransportWitness, F: LscFun, H: LscFun) -> Verification:
    """Re-check F <= sum mult*1_piece and sum mult*1_{mover(piece)} <= H."""
    space = F.space
    for e in w.entries:
        if e.piece.space != space or H.space != space:
            return Verification(False, "witness lives on another space")
        if not (e.piece <= e.mover.dom()):
            return Verification(False, f"piece {e.piece} is not inside dom({e.mover.name})")
        if e.mult == 0:
            return Verification(False, "zero multiplicity entry")
    cov = w.coverage(space)
    bad = first_violation(F, cov)
    if bad is not None:
        return Verification(False, f"coverage below F at {_where(space, bad)}")
    img = w.images(space)
    bad = first_violation(img, H)
    if bad is not None:
        return Verification(False, f"images exceed H at {_where(space, bad)}")
    return Verification(True)


@dataclass
class Decision:
    outcome: str  # "Yes" | "No" | "Unknown"
    witness: TransportWitness | None = None
    certificate: dict | None = None
    state: StateWitness | None = None
    unconditional: bool = True
    budgets: Budgets | None = None
    method: str = ""

    @property
    def yes(self):
        return self.outcome == "Yes"

    def to_json(self):
        d = {"outcome": self.outcome, "method": self.method}
        if self.witness is not None:
            d["witness"] = self.witness.to_json()
            d["movers"] = self.witness.movers()
        if self.outcome == "No":
            d["unconditional"] = self.unconditional
        if self.certificate is not None:
            d["certificate"] = self.certificate
        if self.budgets is not None and not (self.outcome == "Yes" or self.unconditional):
            d["budgets"] = self.budgets.to_json()
        return d


def _check_operands(F, H, model):
    if F.space != model.space or H.space != model.space:
        raise ModelError("operands do not live on the model's space")


def identity_witness(F: LscFun, model) -> TransportWitness:
    one = identity_mover(model.space, model.modulus)
    levels, tail = normal_form(F)
    entries = [WitnessEntry(U, one, 1) for U in levels]
    if not tail.is_empty():
        entries.append(WitnessEntry(tail, one, INF))
    return TransportWitness(entries)


def state_certificate(st: StateWitness, F, H) -> dict:
    return {"kind": "state", "state": st.to_json(), "nu_F": frac_str(st.nu(F)), "nu_H": frac_str(st.nu(H))}


def decide_subequiv(F: LscFun, H: LscFun, model: ActionModel, budgets: Budgets | None = None) -> Decision:
    _check_operands(F, H, model)
    budgets = budgets or model.budgets
    if budgets != model.budgets:
        model = model.with_budgets(budgets)
    if lsc_leq(F, H):
        return Decision("Yes", identity_witness(F, model), method="pointwise order")
    if model.is_finite:
        return _decide_finite(F, H, model)
    return _decide_path(F, H, model, budgets)


# -- finite spaces: flow and orbit mass -------------------------------------------


def reach_table(model):
    """reach[x][y] = first closure element sending x to y."""
    n = len(model.space)
    reach = [dict() for _ in range(n)]
    for s in model.semigroup.nonzero():
        for x, y in s.table:
            reach[x].setdefault(y, s)
    return reach


def orbit_mass_violation(F, H, model):
    for O in finite_orbits(model):
        fm = sum((F.data[x] for x in O), 0)
        hm = sum((H.data[x] for x in O), 0)
        if fm > hm:
            return O
    return None


def orbit_state(model, orbit) -> StateWitness:
    from fractions import Fraction
    pts = model.space.points
    return StateWitness(model.space, {p: Fraction(int(i in orbit)) for i, p in enumerate(pts)})


def _decide_finite(F, H, model) -> Decision:
    n = len(model.space)
    reach = reach_table(model)
    bad_orbit = orbit_mass_violation(F, H, model)

    G = nx.DiGraph()
    G.add_node("s")
    G.add_node("t")
    inf_ok, demand = True, 0
    for x in range(n):
        f = F.data[x]
        if f is INF:
            if not any(H.data[y] is INF for y in reach[x]):
                inf_ok = False
        elif f > 0:
            G.add_edge("s", ("x", x), capacity=f)
            demand += f
            for y in sorted(reach[x]):
                G.add_edge(("x", x), ("y", y))
    for y in range(n):
        if H.data[y] is INF:
            G.add_edge(("y", y), "t")
        elif H.data[y] > 0:
            G.add_edge(("y", y), "t", capacity=H.data[y])
    value, flow = nx.maximum_flow(G, "s", "t") if demand else (0, {})
    flow_ok = inf_ok and value == demand
    if flow_ok != (bad_orbit is None):
        raise InconsistencyError("max-flow and orbit-mass criteria disagree")
    if bad_orbit is not None:
        st = orbit_state(model, bad_orbit)
        cert = state_certificate(st, F, H)
        cert["kind"] = "orbit mass"
        cert["orbit"] = [model.space.points[i] for i in bad_orbit]
        return Decision("No", certificate=cert, state=st, method="max-flow + orbit mass")
    entries = []
    for x in range(n):
        f = F.data[x]
        piece = OpenSet.from_atoms(model.space, [x])
        if f is INF:
            y = min(y for y in reach[x] if H.data[y] is INF)
            entries.append(WitnessEntry(piece, reach[x][y], INF))
            continue
        for node, amount in sorted(flow.get(("x", x), {}).items()):
            if amount > 0:
                entries.append(WitnessEntry(piece, reach[x][node[1]], amount))
    w = TransportWitness(entries)
    if not apply_witness(w, F, H):
        raise InconsistencyError("flow witness failed verification")
    return Decision("Yes", w, method="max-flow + orbit mass")


# -- path spaces: witness search -----------------------------------------------------


@dataclass
class _Candidate:
    piece: str
    mover: object
    image: OpenSet


def path_candidates(F, H, model, budgets):
    """(piece, mover) pairs with piece depth <= budgets.depth that could appear
    in a witness, deduplicated by their (piece, image) effect."""
    sp = model.space
    suppF = F.support()
    out, seen = [], set()
    movers = sorted(model.semigroup.nonzero(), key=lambda s: s.name)
    for P in sorted(sp.cylinders_upto(budgets.depth)):
        ZP = OpenSet.from_atoms(sp, [P])
        if (ZP & suppF).is_empty():
            continue
        for s in movers:
            if not (ZP <= s.dom()):
                continue
            img = s.image(ZP)
            if (P, img) in seen:
                continue
            if not lsc_leq(img.indicator(), H):
                continue
            seen.add((P, img))
            out.append(_Candidate(P, s, img))
    return out


class _NodeLimit(Exception):
    pass


def _decide_path(F, H, model, budgets) -> Decision:
    sp = model.space
    cands = path_candidates(F, H, model, budgets)
    entries = []

    inf_F = OpenSet.from_atoms(sp, [a for a in atoms_of(F) if F.at(a) is INF])
    inf_H = OpenSet.from_atoms(sp, [a for a in atoms_of(H) if H.at(a) is INF])
    inf_ok = True
    if not inf_F.is_empty():
        for a in atoms_of(inf_F, *[OpenSet.from_atoms(sp, [c.piece]) for c in cands]):
            if not inf_F.contains(a):
                continue
            c = next((c for c in cands if a.startswith(c.piece) and c.image <= inf_H), None)
            if c is None:
                inf_ok = False
                break
            e = WitnessEntry(OpenSet.from_atoms(sp, [c.piece]), c.mover, INF)
            if e not in entries:
                entries.append(e)
    F_fin = F.map(lambda v: 0 if v is INF else v)

    found, exhausted = None, True
    if inf_ok:
        try:
            found = _search(F_fin, H, cands, budgets)
        except _NodeLimit:
            exhausted = False
    if inf_ok and found is not None:
        for i, k in found:
            entries.append(WitnessEntry(OpenSet.from_atoms(sp, [cands[i].piece]), cands[i].mover, k))
        w = TransportWitness(entries)
        if not apply_witness(w, F, H):
            raise InconsistencyError("search witness failed verification")
        return Decision("Yes", w, method="witness search")
    st = separating_state(model, F, H)
    if st is not None:
        return Decision("No", certificate=state_certificate(st, F, H), state=st,
                        method="witness search + separating state")
    if exhausted:
        return Decision("No", unconditional=False, budgets=budgets,
                        certificate={"kind": "exhausted", "candidates": len(cands)},
                        method="witness search")
    return Decision("Unknown", budgets=budgets, certificate={"kind": "node limit"}, method="witness search")


def _search(F, H, cands, budgets):
    """Depth-first covering search; returns [(candidate index, multiplicity)] or None."""
    sp = F.space
    words = list(F.words) + list(H.words)
    for c in cands:
        words.append(c.piece)
        words.extend(c.image.parts)
    atoms = sp.partition(words)
    idx = {a: i for i, a in enumerate(atoms)}
    demand0 = tuple(F.at(a) for a in atoms)
    cap0 = tuple(H.at(a) for a in atoms)
    pieces = [tuple(i for i, a in enumerate(atoms) if a.startswith(c.piece)) for c in cands]
    images = [tuple(i for i, a in enumerate(atoms) if c.image.contains(a)) for c in cands]
    covering = {i: [j for j, P in enumerate(pieces) if i in P] for i in range(len(atoms))}
    order = sorted(range(len(atoms)), key=lambda i: (-len(atoms[i]), atoms[i]))
    failed = set()
    nodes = [0]
    mult = budgets.mult
    del idx

    def rec(demand, cap, usage):
        key = (demand, cap, usage)
        if key in failed:
            return None
        nodes[0] += 1
        if nodes[0] > budgets.nodes:
            raise _NodeLimit
        i = next((i for i in order if demand[i] > 0), None)
        if i is None:
            return usage
        for j in covering[i]:
            if usage[j] >= mult:
                continue
            if any(cap[k] == 0 for k in images[j]):
                continue
            nd = list(demand)
            for k in pieces[j]:
                if nd[k]:
                    nd[k] -= 1
            nc = list(cap)
            for k in images[j]:
                if nc[k] is not INF:
                    nc[k] -= 1
            nu = list(usage)
            nu[j] += 1
            r = rec(tuple(nd), tuple(nc), tuple(nu))
            if r is not None:
                return r
        failed.add(key)
        return None

    res = rec(demand0, cap0, tuple([0] * len(cands)))
    if res is None:
        return None
    return [(j, k) for j, k in enumerate(res) if k]


# -- brute-force oracle ----------------------------------------------------------------


ORACLE_MAX_POINTS = 6
ORACLE_MAX_DEPTH = 2
ORACLE_MAX_MULT = 4
ORACLE_MAX_NODES = 300_000


def brute_force_subequiv(F: LscFun, H: LscFun, model: ActionModel, bounds: Budgets | None = None) -> Decision:
    """Exhaustive enumeration of witness multisets within tiny bounds."""
    _check_operands(F, H, model)
    bounds = bounds or model.budgets
    if not F.is_finite():
        raise ContractError("oracle handles finite-valued F only")
    if model.is_finite:
        if len(model.space) > ORACLE_MAX_POINTS or max(F.data) > ORACLE_MAX_MULT:
            raise ContractError("instance exceeds the oracle bounds")
    elif bounds.depth > ORACLE_MAX_DEPTH or bounds.mult > ORACLE_MAX_MULT:
        raise ContractError("instance exceeds the oracle bounds")
    if lsc_leq(F, H):
        # the identity witness is admitted whatever the bounds, as in the search
        return Decision("Yes", identity_witness(F, model), method="pointwise order")
    if model.is_finite:
        return _brute_finite(F, H, model)
    if bounds != model.budgets:
        model = model.with_budgets(bounds)
    return _brute_path(F, H, model, bounds)


def _brute_finite(F, H, model) -> Decision:
    n = len(model.space)
    images = []
    for x in range(n):
        tgt = {}
        for s in model.semigroup.nonzero():
            y = s.apply(x)
            if y is not None and y not in tgt:
                tgt[y] = s
        images.append(tgt)
    pts = [x for x in range(n) if F.data[x] > 0]
    cap = list(H.data)
    chosen = {}

    def rec(k):
        if k == len(pts):
            return True
        x = pts[k]
        for combo in itertools.combinations_with_replacement(sorted(images[x]), F.data[x]):
            used = {}
            for y in combo:
                used[y] = used.get(y, 0) + 1
            if all(cap[y] is INF or cap[y] >= c for y, c in used.items()):
                for y, c in used.items():
                    if cap[y] is not INF:
                        cap[y] -= c
                chosen[x] = used
                if rec(k + 1):
                    return True
                for y, c in used.items():
                    if cap[y] is not INF:
                        cap[y] += c
        return False

    if rec(0):
        entries = [WitnessEntry(OpenSet.from_atoms(model.space, [x]), images[x][y], c)
                   for x in pts for y, c in sorted(chosen[x].items())]
        return Decision("Yes", TransportWitness(entries), method="brute force")
    return Decision("No", certificate={"kind": "exhausted"}, method="brute force")


def _brute_path(F, H, model, bounds) -> Decision:
    sp = model.space
    elems = model.semigroup.nonzero()
    cands = []
    for P in sp.cylinders_upto(bounds.depth):
        ZP = OpenSet.from_atoms(sp, [P])
        for s in elems:
            if s.dom() & ZP != ZP:
                continue
            img = s.image(ZP)
            if any(c[0] == ZP and c[2] == img for c in cands):
                continue
            # moves whose image overflows H or whose piece misses supp F are never useful
            if not lsc_leq(img.indicator(), H) or (ZP & F.support()).is_empty():
                continue
            cands.append((ZP, s, img))
    words = list(F.words) + list(H.words)
    for ZP, _, img in cands:
        words += list(ZP.parts) + list(img.parts)
    atoms = sp.partition(words)
    need = [F.at(a) for a in atoms]
    cap = [H.at(a) for a in atoms]
    pv = [[1 if ZP.contains(a) else 0 for a in atoms] for ZP, _, _ in cands]
    iv = [[1 if img.contains(a) else 0 for a in atoms] for _, _, img in cands]
    m = bounds.mult
    # most coverage the candidates from index i onward can still add
    reach = [[0] * len(atoms) for _ in range(len(cands) + 1)]
    for i in range(len(cands) - 1, -1, -1):
        reach[i] = [r + m * p for r, p in zip(reach[i + 1], pv[i])]
    cov = [0] * len(atoms)
    counts = [0] * len(cands)
    dead = set()

    nodes = [0]

    def rec(i):
        nodes[0] += 1
        if nodes[0] > ORACLE_MAX_NODES:
            raise ContractError("oracle enumeration limit reached")
        if any(cov[a] + reach[i][a] < need[a] for a in range(len(atoms))):
            return False
        if i == len(cands):
            return True
        key = (i, tuple(min(c, n) for c, n in zip(cov, need)), tuple(cap))
        if key in dead:
            return False
        for k in range(m, -1, -1):
            if k and any(iv[i][a] and cap[a] is not INF and cap[a] < k for a in range(len(atoms))):
                continue
            for a in range(len(atoms)):
                cov[a] += k * pv[i][a]
                if iv[i][a] and cap[a] is not INF:
                    cap[a] -= k
            counts[i] = k
            if rec(i + 1):
                return True
            for a in range(len(atoms)):
                cov[a] -= k * pv[i][a]
                if iv[i][a] and cap[a] is not INF:
                    cap[a] += k
            counts[i] = 0
        dead.add(key)
        return False

    if rec(0):
        entries = [WitnessEntry(cands[i][0], cands[i][1], k) for i, k in enumerate(counts) if k]
        return Decision("Yes", TransportWitness(entries), method="brute force")
    return Decision("No", unconditional=False, budgets=bounds, certificate={"kind": "exhausted"},
                    method="brute force")


# -- transitivity at witness level ---------------------------------------------------


def compose_witnesses(w1: TransportWitness, w2: TransportWitness, F, G, H) -> TransportWitness:
    """From F ≼ G (w1) and G ≼ H (w2) build a witness for F ≼ H."""
    if not apply_witness(w1, F, G) or not apply_witness(w2, G, H):
        raise ContractError("input witnesses do not verify")
    if not G.is_finite():
        raise ContractError("middle term must be finite-valued")
    space = F.space
    xs = [e.mover.image(e.piece).indicator(e.mult) for e in w1.entries]
    ys = [e.piece.indicator(e.mult) for e in w2.entries]
    if not xs:
        return TransportWitness([])
    u = almost_refinement(xs, xs, ys)
    agg = {}
    order = []
    for i, e1 in enumerate(w1.entries):
        back = e1.mover.inverse()
        for j, e2 in enumerate(w2.entries):
            uij = u[i][j]
            if uij.is_zero():
                continue
            mover = e2.mover.compose(e1.mover)
            for a in atoms_of(uij):
                k = uij.at(a)
                if k == 0:
                    continue
                piece = back.image(OpenSet.from_atoms(space, [a]))
                key = (piece, mover.name)
                if key not in agg:
                    agg[key] = [piece, mover, 0]
                    order.append(key)
                agg[key][2] += k
    w = TransportWitness([WitnessEntry(p, m, k) for p, m, k in (agg[key] for key in order)])
    check = apply_witness(w, F, H)
    if not check:
        raise ContractError(f"composite witness failed: {check.failure}")
    return w
