"""Partial bijections of the base space: the elements of the acting
inverse semigroup.

Finite-space movers are explicit tables, optionally carrying a tag in
``Z/modulus`` that labels the groupoid arrow they come from (so a mover can
act trivially on a point without being a unit).  Path-space movers are
prefix exchanges ``q -> p`` sending ``Z(q w)`` to ``Z(p w)``, optionally cut
down to an open subset of their natural domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .lsc import LscFun, OpenSet, intersect
from .spaces import FiniteSpace, PathSpace


def inverse_name(name: str) -> str:
    if name in ("1", "0"):
        return name
    parts = name.split(".")
    return ".".join(p[:-1] if p.endswith("*") else p + "*" for p in reversed(parts))


def compose_name(outer: str, inner: str) -> str:
    if outer == "1":
        return inner
    if inner == "1":
        return outer
    return f"{outer}.{inner}"


@dataclass(frozen=True)
class PartialBijection:
    space: FiniteSpace
    table: tuple  # sorted (x, y) index pairs
    tag: int = 0
    modulus: int = 1
    name: str = field(default="?", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(sorted(self.table)))
        object.__setattr__(self, "tag", self.tag % self.modulus if self.table else 0)

    @classmethod
    def identity(cls, space, modulus=1):
        return cls(space, tuple((i, i) for i in range(len(space))), 0, modulus, "1")

    @classmethod
    def zero(cls, space, modulus=1):
        return cls(space, (), 0, modulus, "0")

    @cached_property
    def _fwd(self):
        return dict(self.table)

    @property
    def key(self):
        return (self.table, self.tag)

    def injectivity_violation(self):
        seen = {}
        for x, y in self.table:
            if y in seen:
                return (seen[y], x)
            seen[y] = x
        return None

    def apply(self, x):
        return self._fwd.get(x)

    def dom(self) -> OpenSet:
        return OpenSet.from_atoms(self.space, [x for x, _ in self.table])

    def ran(self) -> OpenSet:
        return OpenSet.from_atoms(self.space, [y for _, y in self.table])

    def image(self, U: OpenSet) -> OpenSet:
        return OpenSet.from_atoms(self.space, [self._fwd[x] for x in U.parts if x in self._fwd])

    def push(self, F: LscFun) -> LscFun:
        """theta_s(F): F moved along s, restricted to dom(s) first."""
        return LscFun.from_pairs(self.space, [(y, F.at(x)) for x, y in self.table])

    def inverse(self):
        return PartialBijection(self.space, tuple((y, x) for x, y in self.table),
                                -self.tag, self.modulus, inverse_name(self.name))

    def compose(self, inner):
        """self ∘ inner."""
        table = [(x, self._fwd[y]) for x, y in inner.table if y in self._fwd]
        return PartialBijection(self.space, tuple(table), self.tag + inner.tag, self.modulus,
                                compose_name(self.name, inner.name))

    def restrict_to(self, U: OpenSet):
        return PartialBijection(self.space, tuple((x, y) for x, y in self.table if x in U.parts),
                                self.tag, self.modulus, self.name + "|")

    def is_zero(self) -> bool:
        return not self.table

    def is_idempotent(self) -> bool:
        return self.tag == 0 and all(x == y for x, y in self.table)

    def fixed_atoms(self):
        return [x for x, y in self.table if x == y]

    def describe(self):
        pts = self.space.points
        d = {"type": "partial_bijection", "map": {pts[x]: pts[y] for x, y in self.table}}
        if self.modulus > 1:
            d["tag"] = self.tag
        return d

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=False)
class PrefixExchange:
    space: PathSpace
    q: str
    p: str
    restrict: OpenSet | None = None
    name: str = "?"

    @classmethod
    def identity(cls, space):
        return cls(space, "", "", None, "1")

    @classmethod
    def zero(cls, space):
        return cls(space, "", "", OpenSet.empty(space), "0")

    def natural_words(self) -> list:
        sp, q, p = self.space, self.q, self.p
        eq, ep = sp.end(q), sp.end(p)
        if eq is None and ep is not None:
            return [q + e for e in sp.next_edges(p)]
        if eq is not None and ep is not None and eq != ep:
            return []
        return [q]

    @cached_property
    def _dom(self) -> OpenSet:
        nat = OpenSet.from_atoms(self.space, self.natural_words())
        return nat if self.restrict is None else intersect(nat, self.restrict)

    def dom(self) -> OpenSet:
        return self._dom

    @cached_property
    def _ran(self) -> OpenSet:
        return self.image(self._dom)

    def ran(self) -> OpenSet:
        return self._ran

    def _cells(self, words):
        sp = self.space
        nat = self.natural_words()
        cells = sp.partition(list(words) + list(self._dom.parts) + nat)
        return [c for c in cells if self._dom.contains(c) and any(c.startswith(n) for n in nat)]

    def image_word(self, c: str) -> str:
        return self.p + c[len(self.q):]

    def apply_word(self, w: str):
        """Image of a (deep enough) literal word, or None outside the domain."""
        if not self._dom.contains(w) or not w.startswith(self.q):
            return None
        if not any(w.startswith(n) for n in self.natural_words()):
            return None
        return self.image_word(w)

    def image(self, U: OpenSet) -> OpenSet:
        cells = [c for c in self._cells(U.parts) if U.contains(c)]
        return OpenSet.from_atoms(self.space, [self.image_word(c) for c in cells])

    def push(self, F: LscFun) -> LscFun:
        cells = self._cells(F.words)
        return LscFun.from_pairs(self.space, [(self.image_word(c), F.at(c)) for c in cells])

    def inverse(self):
        restrict = None if self.restrict is None else self.ran()
        return PrefixExchange(self.space, self.p, self.q, restrict, inverse_name(self.name))

    def compose(self, inner):
        """self ∘ inner."""
        name = compose_name(self.name, inner.name)
        if self.is_zero() or inner.is_zero():
            return PrefixExchange(self.space, "", "", OpenSet.empty(self.space), name)
        q1, p1, q2, p2 = inner.q, inner.p, self.q, self.p
        if p1.startswith(q2):
            q, p = q1, p2 + p1[len(q2):]
        elif q2.startswith(p1):
            q, p = q1 + q2[len(p1):], p2
        else:
            return PrefixExchange(self.space, "", "", OpenSet.empty(self.space), name)
        pre = inner.inverse().image(intersect(inner.ran(), self.dom()))
        if pre.is_empty():
            return PrefixExchange(self.space, "", "", OpenSet.empty(self.space), name)
        cand = PrefixExchange(self.space, q, p, None, name)
        if cand.dom() == pre:
            return cand
        return PrefixExchange(self.space, q, p, pre, name)

    def restrict_to(self, U: OpenSet):
        D = intersect(self._dom, U)
        if D == self._dom:
            return PrefixExchange(self.space, self.q, self.p, self.restrict, self.name)
        return PrefixExchange(self.space, self.q, self.p, D, self.name + "|")

    def is_zero(self) -> bool:
        return self._dom.is_empty()

    @cached_property
    def key(self):
        sp = self.space
        if self.is_zero():
            return ((), ())
        fine = []
        for c in self._cells(()):
            steps = 0
            while len(sp.next_edges(c)) == 1 and steps <= len(sp.vertices):
                c = c + sp.next_edges(c)[0]
                steps += 1
            fine.extend(sp.children(c) if len(sp.next_edges(c)) > 1 else [c])
        pairs = sorted((sp.canonical(c), sp.canonical(self.image_word(c))) for c in fine)
        return (self._dom.parts, tuple(pairs))

    def __eq__(self, other):
        return isinstance(other, PrefixExchange) and self.space == other.space and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def is_idempotent(self) -> bool:
        return all(a == b for a, b in self.key[1])

    def describe(self):
        d = {"type": "prefix_exchange", "from": self.q, "to": self.p}
        if self.restrict is not None:
            d["restrict"] = list(self.dom().parts)
        return d

    def __str__(self):
        return self.name


def natural_leq(s, t) -> bool:
    """s <= t in the natural partial order, i.e. s is a restriction of t."""
    if s.is_zero():
        return True
    if not (s.dom() <= t.dom()):
        return False
    return t.restrict_to(s.dom()).key == s.key


def identity_mover(space, modulus=1):
    if isinstance(space, FiniteSpace):
        return PartialBijection.identity(space, modulus)
    return PrefixExchange.identity(space)


def zero_mover(space, modulus=1):
    if isinstance(space, FiniteSpace):
        return PartialBijection.zero(space, modulus)
    return PrefixExchange.zero(space)
