"""The two base-space models: a finite discrete set and the infinite-path
space of a finite directed graph.

Path-space points are never materialised; everything is done with cylinder
sets ``Z(w)`` named by finite paths ``w``.  Edge names are single characters,
so a finite path is a plain string and ``""`` names the whole space.  Paths
are read left to right: ``e1 e2`` is a path when the range of ``e1`` is the
source of ``e2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import ModelError


@dataclass(frozen=True)
class FiniteSpace:
    points: tuple

    kind = "finite"

    def __post_init__(self):
        if not self.points:
            raise ModelError("finite space needs at least one point")
        if len(set(self.points)) != len(self.points):
            raise ModelError("duplicate point labels")

    def __len__(self):
        return len(self.points)

    @cached_property
    def _index(self):
        return {p: i for i, p in enumerate(self.points)}

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ModelError(f"unknown point {label!r}") from None

    def atoms(self, words=()):
        return list(range(len(self.points)))

    def describe(self):
        return {"kind": "finite", "points": list(self.points)}


@dataclass(frozen=True)
class PathSpace:
    vertices: tuple
    edges: tuple  # (name, source, range) triples

    kind = "path"

    def __post_init__(self):
        names = [e[0] for e in self.edges]
        if len(set(names)) != len(names):
            raise ModelError("duplicate edge names")
        for name, s, r in self.edges:
            if not isinstance(name, str) or len(name) != 1:
                raise ModelError(f"edge names must be single characters, got {name!r}")
            if s not in self.vertices or r not in self.vertices:
                raise ModelError(f"edge {name!r} uses an unknown vertex")
        for v in self.vertices:
            if not self._out[v]:
                raise ModelError(f"vertex {v!r} emits no edge; some cylinder would be empty")

    @cached_property
    def _src(self):
        return {n: s for n, s, _ in self.edges}

    @cached_property
    def _rng(self):
        return {n: r for n, _, r in self.edges}

    @cached_property
    def _out(self):
        out = {v: [] for v in self.vertices}
        for n, s, _ in self.edges:
            out[s].append(n)
        return {v: tuple(sorted(es)) for v, es in out.items()}

    @cached_property
    def _all_edges(self):
        return tuple(sorted(n for n, _, _ in self.edges))

    def source(self, e: str):
        return self._src[e]

    def end(self, w: str):
        return self._rng[w[-1]] if w else None

    def next_edges(self, w: str):
        return self._all_edges if not w else self._out[self._rng[w[-1]]]

    def children(self, w: str) -> list:
        return [w + e for e in self.next_edges(w)]

    def is_path(self, w: str) -> bool:
        if any(c not in self._src for c in w):
            return False
        return all(self._rng[a] == self._src[b] for a, b in zip(w, w[1:]))

    def check_word(self, w: str) -> str:
        if not isinstance(w, str) or not self.is_path(w):
            raise ModelError(f"{w!r} is not a finite path of the graph")
        return w

    def canonical(self, w: str) -> str:
        """Shortest word naming the same cylinder (strips forced steps)."""
        while w and len(self.next_edges(w[:-1])) == 1:
            w = w[:-1]
        return w

    def words(self, depth: int) -> list:
        level = [""]
        for _ in range(depth):
            level = [c for w in level for c in self.children(w)]
        return level

    def cylinders_upto(self, depth: int) -> list:
        """Distinct cylinders of literal depth <= depth, as canonical words."""
        seen, out = set(), []
        for d in range(depth + 1):
            for w in self.words(d):
                c = self.canonical(w)
                if c not in seen:
                    seen.add(c)
                    out.append(c)
        return out

    def partition(self, words) -> list:
        """Coarsest partition of X into literal cylinders refining ``words``."""
        words = set(words)
        out, stack = [], [""]
        while stack:
            c = stack.pop()
            if any(len(t) > len(c) and t.startswith(c) for t in words):
                stack.extend(reversed(self.children(c)))
            else:
                out.append(c)
        return sorted(out)

    def atoms(self, words=()):
        return self.partition(words)

    def canonical_pairs(self, pairs) -> tuple:
        """Canonical form of a step function given on disjoint literal cylinders.

        Zero values are dropped; sibling families with one common value
        collapse to their parent.
        """
        vals = {}
        for w, v in pairs:
            if v == 0:
                continue
            c = self.canonical(w)
            if c in vals and vals[c] != v:
                raise ValueError(f"conflicting values on cylinder {c!r}")
            vals[c] = v
        changed = True
        while changed:
            changed = False
            parents = sorted({w[:-1] for w in vals if w}, key=lambda p: -len(p))
            for p in parents:
                kids = self.children(p)
                if len(kids) < 2 or not all(k in vals for k in kids):
                    continue
                v = vals[kids[0]]
                if all(vals[k] == v for k in kids):
                    for k in kids:
                        del vals[k]
                    vals[self.canonical(p)] = v
                    changed = True
                    break
        return tuple(sorted(vals.items()))

    def describe(self):
        return {
            "kind": "path",
            "vertices": list(self.vertices),
            "edges": [{"name": n, "source": s, "range": r} for n, s, r in self.edges],
        }
