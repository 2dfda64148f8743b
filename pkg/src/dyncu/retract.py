"""Cu(C(X)) for finite X as rank vectors, and the retract maps rho / sigma
onto Lsc(X, N̄).

A positive diagonal element over a finite space is a list of strictly
positive rational eigenvalues at each point.  Two such elements are Cuntz
equivalent exactly when their rank vectors agree, so a Cuntz class is stored
as its rank vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError
from .extnat import INF
from .lsc import LscFun
from .movers import PartialBijection
from .spaces import FiniteSpace


@dataclass(frozen=True)
class DiagonalElement:
    space: FiniteSpace
    eigen: tuple  # per point: sorted tuple of positive Fractions

    def __post_init__(self):
        if len(self.eigen) != len(self.space):
            raise ContractError("one eigenvalue list per point")
        fixed = []
        for lst in self.eigen:
            lst = tuple(sorted(Fraction(v) for v in lst))
            if any(v <= 0 for v in lst):
                raise ContractError("eigenvalues must be strictly positive")
            fixed.append(lst)
        object.__setattr__(self, "eigen", tuple(fixed))

    def rank(self) -> LscFun:
        return LscFun(self.space, tuple(len(lst) for lst in self.eigen))

    def cut_down(self, t) -> "DiagonalElement":
        """(a - t)_+ by functional calculus."""
        t = Fraction(t)
        return DiagonalElement(self.space, tuple(tuple(v - t for v in lst if v > t) for lst in self.eigen))

    def breakpoints(self) -> list:
        return sorted({v for lst in self.eigen for v in lst})

    def transport(self, s: PartialBijection) -> "DiagonalElement":
        """Move an element supported in dom(s) along s."""
        dom = {x for x, _ in s.table}
        if any(self.eigen[x] for x in range(len(self.space)) if x not in dom):
            raise ContractError("element is not supported in the mover's domain")
        out = [()] * len(self.space)
        for x, y in s.table:
            out[y] = self.eigen[x]
        return DiagonalElement(self.space, tuple(out))

    def __add__(self, other):
        """Direct-sum combination of commuting diagonals (eigenvalue lists joined)."""
        return DiagonalElement(self.space, tuple(a + b for a, b in zip(self.eigen, other.eigen)))


@dataclass(frozen=True)
class RankVectorCuClass:
    rank: LscFun


def cuntz_class(a: DiagonalElement) -> RankVectorCuClass:
    return RankVectorCuClass(a.rank())


def rho(F: LscFun) -> RankVectorCuClass:
    """Embed Lsc(X, N̄) into Cu(C(X)): the class of a diagonal projection of rank F."""
    if not isinstance(F.space, FiniteSpace):
        raise ContractError("rank-vector model needs a finite space")
    return RankVectorCuClass(F)


def sigma(c: RankVectorCuClass) -> LscFun:
    """The rank map Cu(C(X)) -> Lsc(X, N̄)."""
    return c.rank


def projection_of_rank(F: LscFun) -> DiagonalElement:
    """A diagonal projection (all eigenvalues 1) whose rank vector is F."""
    if not F.is_finite():
        raise ContractError("finite-rank representative needs a finite-valued function")
    return DiagonalElement(F.space, tuple((Fraction(1),) * v for v in F.data))


def rank_is_finite(F: LscFun) -> bool:
    return all(v is not INF for v in F.data)
