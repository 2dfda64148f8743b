"""Budgeted closure of a generating set of movers, the action model, and the
action-axiom checks."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from .lsc import OpenSet, union
from .movers import PartialBijection, identity_mover, natural_leq, zero_mover
from .spaces import FiniteSpace

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Budgets:
    depth: int = 2  # piece / working cylinder depth
    len: int = 2  # mover word length in the generators
    mult: int = 2  # multiplicity per (piece, image) pair
    nmax: int = 8  # largest n tried in (n+1, n) paradox searches
    nodes: int = 200_000  # search-tree node limit

    def __post_init__(self):
        for k in ("depth", "len", "mult", "nmax", "nodes"):
            if getattr(self, k) <= 0:
                raise ValueError(f"budget {k} must be positive")

    @classmethod
    def parse(cls, text: str, base: "Budgets | None" = None) -> "Budgets":
        vals = dict((base or cls()).__dict__)
        for item in filter(None, (t.strip() for t in text.split(","))):
            k, _, v = item.partition("=")
            k = k.strip()
            if k not in vals:
                raise ValueError(f"unknown budget {k!r}")
            vals[k] = int(v)
        return cls(**vals)

    def to_json(self):
        return dict(self.__dict__)


@dataclass
class InverseSemigroup:
    space: object
    generators: list
    elements: list  # unit first, then by word length, then discovery order
    saturated: bool
    max_len: int | None

    @property
    def unit(self):
        return self.elements[0]

    def nonzero(self):
        return [s for s in self.elements if not s.is_zero()]

    def idempotents(self):
        return [s for s in self.elements if s.is_idempotent() and not s.is_zero()]

    def by_name(self, name):
        for s in self.elements:
            if s.name == name:
                return s
        raise KeyError(name)


def closure(generators, space, max_len=None, modulus=1) -> InverseSemigroup:
    """All products of at most ``max_len`` generators and generator inverses.

    Finite spaces are closed exactly (``max_len`` is ignored).  A path-space
    closure is saturated when one extra level of products produced nothing
    new, in which case it is the whole semigroup.
    """
    letters = []
    for g in generators:
        letters.append(g)
        inv = g.inverse()
        if inv != g:
            letters.append(inv)
    unit = identity_mover(space, modulus)
    seen = {unit: unit}
    frontier = [unit]
    length = 0
    limit = None if isinstance(space, FiniteSpace) else max_len
    saturated = False
    while True:
        if limit is not None and length >= limit:
            # probe one more level to learn whether we are saturated
            saturated = all(g.compose(s) in seen or g.compose(s).is_zero() for s in frontier for g in letters)
            break
        new = []
        for s in frontier:
            for g in letters:
                t = g.compose(s)
                if t.is_zero():
                    t = zero_mover(space, modulus)
                if t not in seen:
                    seen[t] = t
                    new.append(t)
        length += 1
        if not new:
            saturated = True
            break
        frontier = new
    elements = list(seen.values())
    log.debug("closure: %d elements, saturated=%s", len(elements), saturated)
    return InverseSemigroup(space, list(generators), elements, saturated, limit)


@dataclass
class ActionModel:
    space: object
    generators: list
    budgets: Budgets = field(default_factory=Budgets)
    modulus: int = 1
    name: str = "model"
    unit_element: object = None  # designated F0, defaults to 1_X
    samples: list = field(default_factory=list)
    _semigroup: InverseSemigroup | None = field(default=None, repr=False)

    @property
    def semigroup(self) -> InverseSemigroup:
        if self._semigroup is None:
            self._semigroup = closure(self.generators, self.space, self.budgets.len, self.modulus)
        return self._semigroup

    @property
    def is_finite(self) -> bool:
        return isinstance(self.space, FiniteSpace)

    def with_budgets(self, budgets: Budgets) -> "ActionModel":
        return ActionModel(self.space, self.generators, budgets, self.modulus, self.name,
                           self.unit_element, self.samples)

    def one(self):
        from .lsc import LscFun
        return LscFun.constant(self.space, 1)

    def f0(self):
        return self.unit_element if self.unit_element is not None else self.one()


def ideal_support(s, S: InverseSemigroup) -> OpenSet:
    """O_{s,1}: union of the domains of idempotents of S lying below s (and 1)."""
    doms = [e.dom() for e in S.idempotents() if natural_leq(e, s)]
    return union(*doms) if doms else OpenSet.empty(S.space)


def _sample_atoms(model: ActionModel, depth=3):
    if model.is_finite:
        return list(range(len(model.space)))
    return model.space.words(depth)


def _apply(s, atom):
    return s.apply(atom) if isinstance(s, PartialBijection) else s.apply_word(atom)


def validate_action(model: ActionModel, max_triples=400, depth=3) -> dict:
    """Check the action axioms on the (budgeted) closure.

    Returns ``{"ok": bool, "checks": {...}, "counterexample": ...}``.
    """
    report = {"ok": True, "checks": {}, "counterexample": None}

    def fail(check, detail):
        report["checks"][check] = "fail"
        if report["ok"]:
            report["counterexample"] = {"check": check, "detail": detail}
        report["ok"] = False

    if model.is_finite:
        for g in model.generators:
            bad = g.injectivity_violation()
            if bad is not None:
                pts = model.space.points
                fail("injective", f"generator {g.name} sends {pts[bad[0]]} and {pts[bad[1]]} to the same point")
                return report
    report["checks"]["injective"] = "pass"
    S = model.semigroup
    atoms = _sample_atoms(model, depth)
    elems = S.nonzero()

    # homomorphism: (s t)(x) = s(t(x)) on sampled triples
    pairs = list(itertools.islice(itertools.product(elems, elems), max_triples))
    for s, t in pairs:
        st = s.compose(t)
        for x in atoms:
            tx = _apply(t, x)
            lhs = _apply(st, x)
            rhs = None if tx is None else _apply(s, tx)
            if not _same_point(model, lhs, rhs):
                fail("homomorphism", f"({s.name})({t.name}) at {x!r}")
                break
        if not report["ok"]:
            break
    report["checks"].setdefault("homomorphism", "pass")

    for s in elems:
        if s.compose(s.inverse()).compose(s) != s or s.inverse().compose(s).compose(s.inverse()) != s.inverse():
            fail("inverse_law", f"s s* s != s for {s.name}")
            break
    report["checks"].setdefault("inverse_law", "pass")

    cover = union(*[s.inverse().compose(s).dom() for s in elems]) if elems else OpenSet.empty(model.space)
    if cover != OpenSet.whole(model.space):
        fail("density", f"domains cover only {cover}")
    report["checks"].setdefault("density", "pass")

    for e in S.idempotents():
        for x in atoms:
            if e.dom().contains(x) and not _same_point(model, _apply(e, x), x):
                fail("idempotent_identity", f"{e.name} moves {x!r}")
                break
    report["checks"].setdefault("idempotent_identity", "pass")

    for s, t in pairs:
        if natural_leq(s, t) and not (s.dom() <= t.dom() and s.ran() <= t.ran()):
            fail("order_domains", f"{s.name} <= {t.name} but domains are not nested")
            break
    report["checks"].setdefault("order_domains", "pass")
    return report


def _same_point(model, a, b):
    if a is None or b is None:
        return a is b
    if model.is_finite:
        return a == b
    sp = model.space
    return sp.canonical(a) == sp.canonical(b) if len(a) == len(b) else a == b
