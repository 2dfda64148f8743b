"""Lsc(X, N̄): lower-semicontinuous extended-natural valued step functions.

Over a finite space a function is a value vector; over a path space it is a
finite list of ``(word, value)`` pairs on disjoint cylinders, zero elsewhere.
Both are kept in a canonical form so equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import extnat
from .errors import ContractError, ModelError
from .extnat import INF
from .spaces import FiniteSpace, PathSpace


@dataclass(frozen=True)
class LscFun:
    space: object
    data: tuple

    # -- construction -----------------------------------------------------

    @classmethod
    def from_pairs(cls, space, pairs) -> "LscFun":
        """Build from ``(atom, value)`` pairs over disjoint atoms."""
        if isinstance(space, FiniteSpace):
            vals = [0] * len(space)
            for i, v in pairs:
                vals[i] = v
            return cls(space, tuple(vals))
        return cls(space, space.canonical_pairs(pairs))

    @classmethod
    def zero(cls, space) -> "LscFun":
        return cls.from_pairs(space, [])

    @classmethod
    def constant(cls, space, value=1) -> "LscFun":
        if isinstance(space, FiniteSpace):
            return cls(space, tuple([value] * len(space)))
        return cls.from_pairs(space, [("", value)])

    @classmethod
    def from_values(cls, space, values) -> "LscFun":
        if not isinstance(space, FiniteSpace):
            raise ModelError("value vectors need a finite space")
        if len(values) != len(space):
            raise ModelError(f"expected {len(space)} values, got {len(values)}")
        return cls(space, tuple(extnat.parse(v) for v in values))

    @classmethod
    def from_cylinders(cls, space, items) -> "LscFun":
        if not isinstance(space, PathSpace):
            raise ModelError("cylinder lists need a path space")
        pairs = []
        for w, v in items:
            pairs.append((space.check_word(w), extnat.parse(v)))
        words = [w for w, _ in pairs]
        for a in words:
            for b in words:
                if a is not b and b.startswith(a) and a != b:
                    raise ModelError(f"cylinders {a!r} and {b!r} overlap")
        if len(set(words)) != len(words):
            raise ModelError("repeated cylinder")
        return cls.from_pairs(space, pairs)

    # -- evaluation -------------------------------------------------------

    @property
    def words(self):
        if isinstance(self.space, FiniteSpace):
            return ()
        return tuple(w for w, _ in self.data)

    def at(self, atom):
        if isinstance(self.space, FiniteSpace):
            return self.data[atom]
        for w, v in self.data:
            if atom.startswith(w):
                return v
        return 0

    def is_zero(self) -> bool:
        if isinstance(self.space, FiniteSpace):
            return all(v == 0 for v in self.data)
        return not self.data

    def is_finite(self) -> bool:
        vals = self.data if isinstance(self.space, FiniteSpace) else [v for _, v in self.data]
        return all(v is not INF for v in vals)

    def values(self):
        return self.data if isinstance(self.space, FiniteSpace) else tuple(v for _, v in self.data)

    def support(self) -> "OpenSet":
        return OpenSet.from_atoms(self.space, [a for a in atoms_of(self) if self.at(a) != 0])

    def scale(self, k) -> "LscFun":
        return self.map(lambda v: k * v)

    def map(self, fn) -> "LscFun":
        return LscFun.from_pairs(self.space, [(a, fn(self.at(a))) for a in atoms_of(self)])

    def __add__(self, other):
        return lsc_add(self, other)

    def __le__(self, other):
        return lsc_leq(self, other)

    def to_json(self):
        if isinstance(self.space, FiniteSpace):
            return {"values": [extnat.dump(v) for v in self.data]}
        return {"cylinders": [{"word": w, "value": extnat.dump(v)} for w, v in self.data]}

    def __str__(self):
        if isinstance(self.space, FiniteSpace):
            return "(" + ",".join(str(v) for v in self.data) + ")"
        return "{" + ", ".join(f"{w or 'ε'}:{v}" for w, v in self.data) + "}"


@dataclass(frozen=True)
class OpenSet:
    """A finite union of points (finite space) or of cylinders (path space)."""

    space: object
    parts: tuple

    @classmethod
    def from_atoms(cls, space, atoms) -> "OpenSet":
        if isinstance(space, FiniteSpace):
            return cls(space, tuple(sorted(set(atoms))))
        return cls(space, tuple(w for w, _ in space.canonical_pairs([(a, 1) for a in set(atoms)])))

    @classmethod
    def whole(cls, space) -> "OpenSet":
        if isinstance(space, FiniteSpace):
            return cls(space, tuple(range(len(space))))
        return cls(space, ("",))

    @classmethod
    def empty(cls, space) -> "OpenSet":
        return cls(space, ())

    @classmethod
    def parse(cls, space, items) -> "OpenSet":
        if isinstance(space, FiniteSpace):
            return cls.from_atoms(space, [space.index(p) for p in items])
        pieces = [cls.from_atoms(space, [space.check_word(w)]) for w in items]
        return union(*pieces) if pieces else cls.empty(space)

    @property
    def words(self):
        return () if isinstance(self.space, FiniteSpace) else self.parts

    def indicator(self, value=1) -> LscFun:
        if isinstance(self.space, FiniteSpace):
            return LscFun.from_pairs(self.space, [(i, value) for i in self.parts])
        return LscFun.from_pairs(self.space, [(w, value) for w in self.parts])

    def contains(self, atom) -> bool:
        if isinstance(self.space, FiniteSpace):
            return atom in self.parts
        return any(atom.startswith(w) for w in self.parts)

    def is_empty(self) -> bool:
        return not self.parts

    def __le__(self, other: "OpenSet") -> bool:
        return lsc_leq(self.indicator(), other.indicator())

    def __and__(self, other):
        return intersect(self, other)

    def __or__(self, other):
        return union(self, other)

    def to_json(self):
        if isinstance(self.space, FiniteSpace):
            return [self.space.points[i] for i in self.parts]
        return list(self.parts)

    def __str__(self):
        if isinstance(self.space, FiniteSpace):
            return "{" + ",".join(self.space.points[i] for i in self.parts) + "}"
        return "{" + ",".join(f"Z({w or 'ε'})" for w in self.parts) + "}"


def atoms_of(*objs):
    space = _common_space(objs)
    return space.atoms([w for o in objs for w in o.words])


def _common_space(objs):
    spaces = {o.space for o in objs}
    if len(spaces) != 1:
        raise ModelError("operands live on different base spaces")
    return spaces.pop()


def pointwise(fn, *funcs) -> LscFun:
    space = _common_space(funcs)
    return LscFun.from_pairs(space, [(a, fn(*(f.at(a) for f in funcs))) for a in atoms_of(*funcs)])


def union(*sets) -> OpenSet:
    space = _common_space(sets)
    return OpenSet.from_atoms(space, [a for a in atoms_of(*sets) if any(s.contains(a) for s in sets)])


def intersect(*sets) -> OpenSet:
    space = _common_space(sets)
    return OpenSet.from_atoms(space, [a for a in atoms_of(*sets) if all(s.contains(a) for s in sets)])


def difference(a: OpenSet, b: OpenSet) -> OpenSet:
    return OpenSet.from_atoms(a.space, [x for x in atoms_of(a, b) if a.contains(x) and not b.contains(x)])


# -- the Cu-semigroup operations ---------------------------------------------


def lsc_add(F: LscFun, H: LscFun) -> LscFun:
    return pointwise(lambda a, b: a + b, F, H)


def lsc_sum(funcs, space=None) -> LscFun:
    funcs = list(funcs)
    if not funcs:
        return LscFun.zero(space)
    return pointwise(lambda *vs: sum(vs, 0), *funcs)


def lsc_leq(F: LscFun, H: LscFun) -> bool:
    return all(F.at(a) <= H.at(a) for a in atoms_of(F, H))


def way_below(F: LscFun, H: LscFun) -> bool:
    """F << H.  In these zero-dimensional compact models this is exactly
    "F takes finitely many finite values and F <= H"."""
    return F.is_finite() and lsc_leq(F, H)


def first_violation(F: LscFun, H: LscFun):
    """First atom where F(a) > H(a), or None."""
    for a in atoms_of(F, H):
        if F.at(a) > H.at(a):
            return a
    return None


def normal_form(F: LscFun):
    """Decompose F = sum_i 1_{U_i} + inf * 1_T with U_1 ⊇ U_2 ⊇ ... .

    Returns ``(levels, tail)``: ``levels`` lists the finite-height level sets
    ``U_i = F^{-1}({i, i+1, ...} ∪ {inf})`` up to the largest finite value,
    ``tail`` is the open set where F is infinite (empty for finite F).
    """
    atoms = atoms_of(F)
    finite_vals = [F.at(a) for a in atoms if F.at(a) is not INF]
    top = max(finite_vals, default=0)
    tail = OpenSet.from_atoms(F.space, [a for a in atoms if F.at(a) is INF])
    if not tail.is_empty():
        top = max(top, 1)
    levels = [OpenSet.from_atoms(F.space, [a for a in atoms if F.at(a) >= i]) for i in range(1, top + 1)]
    return levels, tail


def from_normal_form(levels, tail, space) -> LscFun:
    total = lsc_sum([U.indicator() for U in levels], space)
    if not tail.is_empty():
        total = pointwise(lambda a, b: INF if b else a, total, tail.indicator())
    return total


def sup_chain(chain, unbounded=()) -> LscFun:
    """Supremum of a finitely presented increasing chain.

    ``chain`` is read as the eventual behaviour of the sequence; atoms in the
    open sets of ``unbounded`` are declared to grow without bound, so the
    supremum is infinite there.
    """
    chain = list(chain)
    if not chain:
        raise ContractError("empty chain")
    for i, (a, b) in enumerate(zip(chain, chain[1:])):
        if not lsc_leq(a, b):
            raise ContractError(f"chain is not increasing at position {i}")
    top = chain[-1]
    for U in unbounded:
        top = pointwise(lambda a, u: INF if u else a, top, U.indicator())
    return top


def almost_refinement(f, x, y):
    """Almost-refinement matrix ``u[i][j]`` with f_i << sum_j u_ij << x_i and
    sum_i u_ij <= y_j.

    Each atom's mass of x_i is poured into the y_j capacities in index order,
    then cut down to the finite mass of f_i.
    """
    f, x, y = list(f), list(x), list(y)
    if len(f) != len(x):
        raise ContractError("f and x must have the same length")
    space = _common_space(f + x + y)
    for i, (fi, xi) in enumerate(zip(f, x)):
        if not way_below(fi, xi):
            raise ContractError(f"f[{i}] is not way-below x[{i}]")
    atoms = atoms_of(*(f + x + y))
    alloc = [[[] for _ in y] for _ in f]
    for a in atoms:
        need = [fi.at(a) for fi in f]
        cap = [yj.at(a) for yj in y]
        if sum([xi.at(a) for xi in x], 0) > sum(cap, 0) and any(need):
            raise ContractError(f"sum of x exceeds sum of y at {_atom_str(space, a)}")
        for i, xi in enumerate(x):
            mass = xi.at(a)
            keep = need[i]
            for j in range(len(y)):
                if mass == 0:
                    break
                take = min(mass, cap[j])
                if take == 0:
                    continue
                cap[j] = extnat.sub(cap[j], take)
                mass = extnat.sub(mass, take)
                used = min(take, keep)
                keep -= used
                if used:
                    alloc[i][j].append((a, used))
            if keep:
                raise ContractError(f"cannot refine f[{i}] at {_atom_str(space, a)}")
    return [[LscFun.from_pairs(space, alloc[i][j]) for j in range(len(y))] for i in range(len(f))]


def _atom_str(space, a):
    if isinstance(space, FiniteSpace):
        return space.points[a]
    return f"Z({a or 'ε'})"
