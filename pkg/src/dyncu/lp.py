"""Exact feasibility for ``A x = b, x >= 0`` over the rationals.

A dense Phase-I simplex on ``Fraction`` entries with Bland's rule.  An
infeasible system comes back with a Farkas vector ``y`` such that
``y^T A >= 0`` and ``y^T b < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass
class LPResult:
    feasible: bool
    x: list | None = None
    farkas: list | None = None


def solve_feasibility(A, b) -> LPResult:
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return LPResult(True, [Fraction(0)] * n)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    sign = [1] * m
    for i in range(m):
        if b[i] < 0:
            sign[i] = -1
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # tableau columns: n structural, m artificial; last column is the rhs
    T = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    # reduced-cost row for min sum(artificials)
    cost = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        for j in range(n + m + 1):
            cost[j] -= T[i][j]
    for i in range(m):
        cost[n + i] += 1

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        rows = [(T[i][-1] / T[i][enter], basis[i], i) for i in range(m) if T[i][enter] > 0]
        if not rows:  # cannot happen in phase I (objective bounded below by 0)
            raise ArithmeticError("unbounded phase-I problem")
        _, _, r = min(rows)
        _pivot(T, cost, r, enter)
        basis[r] = enter

    value = -cost[-1]
    if value > 0:
        # duals of the phase-I optimum: y_i = 1 - reduced cost of artificial i
        y = [1 - cost[n + i] for i in range(m)]
        farkas = [-y[i] * sign[i] for i in range(m)]
        return LPResult(False, farkas=farkas)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][-1]
    return LPResult(True, x=x)


def _pivot(T, cost, r, c):
    pv = T[r][c]
    T[r] = [v / pv for v in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [a - f * b for a, b in zip(cost, T[r])]


def check_solution(A, b, x) -> bool:
    if any(v < 0 for v in x):
        return False
    return all(sum(Fraction(a) * v for a, v in zip(row, x)) == Fraction(bi) for row, bi in zip(A, b))


def check_farkas(A, b, y) -> bool:
    n = len(A[0]) if A else 0
    cols_ok = all(sum(Fraction(A[i][j]) * y[i] for i in range(len(A))) >= 0 for j in range(n))
    return cols_ok and sum(Fraction(bi) * yi for bi, yi in zip(b, y)) < 0
