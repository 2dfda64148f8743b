"""Invariant states by exact LP, the functionals they induce, and the
functional-to-quasitrace integral for diagonal elements."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError
from .extnat import INF
from .lp import check_farkas, check_solution, solve_feasibility
from .lsc import LscFun, OpenSet, atoms_of
from .retract import DiagonalElement
from .spaces import FiniteSpace


def frac_str(q) -> str:
    if q is INF:
        return "inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass
class StateWitness:
    """Point weights (finite space) or harmonic vertex weights (graph space).

    On a graph, the cylinder measure is ``mu(Z(w)) = t(range of last edge)``
    and ``mu(X)`` is the sum over one-edge cylinders.
    """

    space: object
    weights: dict
    normalized_at: LscFun | None = None
    value: Fraction | None = None

    def measure(self, atom) -> Fraction:
        if isinstance(self.space, FiniteSpace):
            return self.weights[self.space.points[atom]]
        sp = self.space
        if atom == "":
            return sum((self.weights[sp.end(e)] for e in sp.next_edges("")), Fraction(0))
        return self.weights[sp.end(atom)]

    def nu(self, F: LscFun):
        """nu(F) = integral of F; infinite if F = inf on a set of positive measure."""
        total = Fraction(0)
        pts = atoms_of(F)
        for a in pts:
            v = F.at(a)
            if v == 0:
                continue
            mu = self.measure(a)
            if v is INF:
                if mu > 0:
                    return INF
                continue
            total += v * mu
        return total

    def is_faithful(self) -> bool:
        return all(w > 0 for w in self.weights.values())

    def to_json(self):
        d = {"weights": {k: frac_str(v) for k, v in sorted(self.weights.items())}}
        if self.normalized_at is not None:
            d["normalized_at"] = self.normalized_at.to_json()
            d["value"] = frac_str(self.value)
        return d


@dataclass
class Infeasible:
    """No invariant state of the searched family; ``farkas`` refutes the LP."""

    rows: list
    rhs: list
    labels: list
    farkas: list

    def verify(self) -> bool:
        return check_farkas(self.rows, self.rhs, self.farkas)

    def to_json(self):
        nz = [(lab, frac_str(y)) for lab, y in zip(self.labels, self.farkas) if y != 0]
        return {"infeasible": True, "certificate": "farkas", "combination": [{"constraint": a, "y": y} for a, y in nz]}


# -- linear forms ----------------------------------------------------------------


def _variables(model):
    sp = model.space
    return list(sp.points) if model.is_finite else list(sp.vertices)


def _measure_form(model, atom) -> dict:
    """mu(atom) as a sparse linear form in the weight variables."""
    sp = model.space
    if model.is_finite:
        return {sp.points[atom]: Fraction(1)}
    if atom == "":
        form = {}
        for e in sp.next_edges(""):
            v = sp.end(e)
            form[v] = form.get(v, 0) + 1
        return form
    return {sp.end(atom): Fraction(1)}


def _nu_form(model, F: LscFun) -> dict:
    form = {}
    for a in atoms_of(F):
        v = F.at(a)
        if v == 0:
            continue
        if v is INF:
            raise ContractError("linear form of an infinite-valued function")
        for k, c in _measure_form(model, a).items():
            form[k] = form.get(k, 0) + v * c
    return form


def _sub(f, g):
    out = dict(f)
    for k, c in g.items():
        out[k] = out.get(k, 0) - c
    return {k: c for k, c in out.items() if c != 0}


def invariance_rows(model):
    """Homogeneous equalities every invariant state must satisfy, labelled."""
    sp = model.space
    rows = []
    if model.is_finite:
        for g in model.generators:
            for x, y in g.table:
                if x != y:
                    rows.append((f"{g.name}: w({sp.points[x]}) = w({sp.points[y]})",
                                 _sub({sp.points[x]: 1}, {sp.points[y]: 1})))
        return rows
    for v in sp.vertices:
        form = {v: Fraction(1)}
        for e in sp.next_edges(""):
            if sp.source(e) == v:
                form = _sub(form, {sp.end(e): 1})
        rows.append((f"harmonic at {v}", form))
    for g in model.generators:
        cells = g._cells(())
        cells = cells + [c for w in cells for c in sp.children(w)]
        for c in cells:
            form = _sub(_measure_form(model, c), _measure_form(model, g.image_word(c)))
            rows.append((f"{g.name}: mu(Z({c or 'ε'})) = mu(image)", form))
    return rows


def _system(model, normalizations):
    """Invariance rows plus inhomogeneous rows ``(label, form, rhs)``."""
    names = _variables(model)
    hom = [r for r in invariance_rows(model) if r[1]]
    labels = [lab for lab, _ in hom] + [lab for lab, _, _ in normalizations]
    forms = [f for _, f in hom] + [f for _, f, _ in normalizations]
    A = [[Fraction(f.get(v, 0)) for v in names] for f in forms]
    b = [Fraction(0)] * len(hom) + [Fraction(r) for _, _, r in normalizations]
    return A, b, labels, names


def find_invariant_state(model, normalize_at: LscFun | None = None):
    """A state with nu(F0) = 1, or an Infeasible certificate."""
    F0 = model.f0() if normalize_at is None else normalize_at
    if F0.is_zero() or not F0.is_finite():
        raise ContractError("normalization element must be finite-valued and nonzero")
    A, b, labels, names = _system(model, [("normalization nu(F0) = 1", _nu_form(model, F0), 1)])
    res = solve_feasibility(A, b)
    if not res.feasible:
        return Infeasible(A, b, labels, res.farkas)
    assert check_solution(A, b, res.x)
    return StateWitness(model.space, dict(zip(names, res.x)), F0, Fraction(1))


def separating_state(model, F: LscFun, H: LscFun):
    """An invariant state with nu(F) > nu(H), or None if the family has none."""
    sp = model.space
    inf_F = OpenSet.from_atoms(sp, [a for a in atoms_of(F) if F.at(a) is INF]).indicator()
    inf_H = OpenSet.from_atoms(sp, [a for a in atoms_of(H) if H.at(a) is INF]).indicator()
    norms = []
    if not inf_H.is_zero():
        norms.append(("nu(H = inf) = 0", _nu_form(model, inf_H), 0))
    if not inf_F.is_zero():
        norms.append(("nu(F = inf) = 1", _nu_form(model, inf_F), 1))
    else:
        H_fin = H.map(lambda v: 0 if v is INF else v)
        norms.append(("nu(F) - nu(H) = 1", _sub(_nu_form(model, F), _nu_form(model, H_fin)), 1))
    A, b, labels, names = _system(model, norms)
    res = solve_feasibility(A, b)
    if not res.feasible:
        return None
    return StateWitness(sp, dict(zip(names, res.x)))


def verify_state(model, st: StateWitness) -> list:
    """Re-check a state from scratch; returns the list of violated conditions."""
    sp = model.space
    errs = []
    if any(w < 0 for w in st.weights.values()):
        errs.append("negative weight")
    if model.is_finite:
        for g in model.generators:
            for x, y in g.table:
                if st.weights[sp.points[x]] != st.weights[sp.points[y]]:
                    errs.append(f"not invariant under {g.name} at {sp.points[x]}")
    else:
        for w in sp.words(1) + sp.words(2):
            kids = sp.children(w)
            if st.measure(w) != sum((st.measure(k) for k in kids), Fraction(0)):
                errs.append(f"not additive at Z({w})")
        for g in model.generators:
            for c in g._cells(sp.words(2)):
                if st.measure(c) != st.measure(g.image_word(c)):
                    errs.append(f"not invariant under {g.name} at Z({c or 'ε'})")
    if st.normalized_at is not None and st.nu(st.normalized_at) != st.value:
        errs.append("normalization fails")
    return errs


# -- functionals and quasitraces --------------------------------------------------


class Functional:
    """beta(F) = sup{ nu(z) : z << F }, lifted from a state on classes."""

    def __init__(self, nu, space):
        self._nu = nu
        self.space = space

    def __call__(self, F: LscFun):
        if F.is_finite():
            return self._nu(F)
        top = max([v for v in F.values() if v is not INF], default=0)
        lo = self._nu(F.map(lambda v: top + 1 if v is INF else v))
        hi = self._nu(F.map(lambda v: top + 2 if v is INF else v))
        return lo if lo == hi else INF


def lift_state_to_functional(state: StateWitness) -> Functional:
    return Functional(state.nu, state.space)


def quasitrace(a: DiagonalElement, beta: Functional) -> Fraction:
    """tau_beta(a) = integral_0^inf beta([(a - t)_+]) dt, by breakpoints.

    rank((a - t)_+) is constant between consecutive eigenvalues.
    """
    total, prev = Fraction(0), Fraction(0)
    for t in a.breakpoints():
        total += (t - prev) * beta(a.cut_down(prev).rank())
        prev = t
    return total


def quasitrace_closed_form(a: DiagonalElement, state: StateWitness) -> Fraction:
    return sum((state.weights[p] * sum(lst, Fraction(0)) for p, lst in zip(a.space.points, a.eigen)),
               Fraction(0))
