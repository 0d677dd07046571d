"""Brute-force LP oracle: enumerate every basic solution and keep the best feasible one.

Shares nothing with the simplex code path beyond :class:`LPInstance`. It is
only meant for small instances (about 8 variables) whose feasible region,
if nonempty, has a vertex and a bounded optimum; it cannot detect
unboundedness.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import lcm

from .lp import EQ, GE, LE, LPInstance, primal_feasible


def _integer_row(coeffs, b) -> tuple[list[int], int]:
    den = lcm(*(c.denominator for c in coeffs), b.denominator)
    return [int(c * den) for c in coeffs], int(b * den)


def _solve_square(rows: list[list[int]], rhs: list[int]) -> list[Fraction] | None:
    """Fraction-free (Bareiss) elimination; ``None`` when the system is singular."""
    n = len(rows)
    M = [r[:] + [b] for r, b in zip(rows, rhs)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if M[i][k]), None)
        if p is None:
            return None
        if p != k:
            M[k], M[p] = M[p], M[k]
        pk = M[k][k]
        for i in range(k + 1, n):
            mi = M[i]
            f = mi[k]
            for j in range(k + 1, n + 1):
                mi[j] = (pk * mi[j] - f * M[k][j]) // prev
            mi[k] = 0
        prev = pk
    x: list[Fraction] = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(M[i][n])
        for j in range(i + 1, n):
            s -= M[i][j] * x[j]
        x[i] = s / M[i][i]
    return x


def _independent_rows(rows: list[list[int]], candidates: list[int]) -> list[int]:
    """Greedy maximal linearly independent subset of ``candidates`` (row indices)."""
    basis: list[tuple[int, list[Fraction]]] = []  # (pivot column, reduced row)
    kept = []
    for i in candidates:
        r = [Fraction(v) for v in rows[i]]
        for col, br in basis:
            if r[col]:
                f = r[col] / br[col]
                r = [a - f * b for a, b in zip(r, br)]
        col = next((j for j, v in enumerate(r) if v), None)
        if col is not None:
            basis.append((col, r))
            kept.append(i)
    return kept


def solve_by_vertices(lp: LPInstance) -> tuple[str, Fraction | None, tuple[Fraction, ...]]:
    """Return ``("optimal", value, vertex)`` or ``("infeasible", None, ())``."""
    n = lp.num_vars
    cons: list[tuple[list[int], int, str]] = []
    for row, sense, b in zip(lp.matrix, lp.senses, lp.rhs):
        a, bb = _integer_row(row, b)
        cons.append((a, bb, sense))
    for j in range(n):
        unit = [Fraction(int(i == j)) for i in range(n)]
        if lp.lower[j] is not None:
            a, bb = _integer_row(unit, lp.lower[j])
            cons.append((a, bb, GE))
        if lp.upper[j] is not None:
            a, bb = _integer_row(unit, lp.upper[j])
            cons.append((a, bb, LE))
    eq_idx = _independent_rows([cons[i][0] for i in range(len(cons))], [i for i, c in enumerate(cons) if c[2] == EQ])
    other = [i for i, c in enumerate(cons) if c[2] != EQ]
    best: tuple[Fraction, tuple[Fraction, ...]] | None = None
    sign = 1 if lp.maximize else -1
    # every vertex has n independent active constraints; extend a basis of the equality rows
    pools = [(eq_idx, list(sub)) for sub in combinations(other, n - len(eq_idx))]
    for eqs, ineqs in pools:
        chosen = eqs + ineqs
        x = _solve_square([cons[i][0] for i in chosen], [cons[i][1] for i in chosen])
        if x is None or not primal_feasible(lp, x):
            continue
        val = sum((c * v for c, v in zip(lp.objective, x)), Fraction(0))
        if best is None or sign * val > sign * best[0]:
            best = (val, tuple(x))
    if best is None:
        return "infeasible", None, ()
    return "optimal", best[0], best[1]
