"""Extended natural numbers: plain ``int`` values plus the absorbing ``INF``."""

from __future__ import annotations

from typing import Union


class _Infinity:
    __slots__ = ()

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, k):
        # 0 * inf = 0 (scalar multiples of Lsc functions)
        return 0 if k == 0 else self

    __rmul__ = __mul__

    def __sub__(self, k):
        if k is self:
            raise ArithmeticError("inf - inf is undefined")
        return self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("dyncu.INF")

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return "INF"


INF = _Infinity()

ExtNat = Union[int, _Infinity]


def is_finite(v) -> bool:
    return v is not INF


def sub(a, b):
    """Truncated subtraction ``max(a - b, 0)`` with ``inf - n = inf``."""
    if a is INF:
        return INF
    if b is INF:
        return 0
    return max(a - b, 0)


def parse(v) -> ExtNat:
    if v is INF:
        return v
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        v = int(v)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"not an extended natural: {v!r}")
    if v < 0:
        raise ValueError(f"negative value {v}")
    return v


def dump(v):
    return "inf" if v is INF else v
