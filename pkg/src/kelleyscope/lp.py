"""Exact linear programming over :class:`fractions.Fraction`.

Two-phase tableau simplex with Bland's rule (smallest-index entering column,
ties in the ratio test broken by smallest basic-variable index), so identical
input always yields the identical vertex. Row duals are read off the final
basis; :func:`verify` rechecks primal feasibility, dual feasibility and the
exact equality of both objective values without trusting the solver.

Dual sign convention, for a maximisation problem: ``<=`` rows carry
``y >= 0``, ``>=`` rows ``y <= 0``, ``=`` rows are free. For a minimisation
problem all signs flip.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import StructuralError

LE, EQ, GE = "<=", "=", ">="
SENSES = (LE, EQ, GE)

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"

_ZERO = Fraction(0)


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise StructuralError("floating-point coefficients are not accepted; use Fraction or int")
    return Fraction(v)


@dataclass(frozen=True)
class LPInstance:
    """optimise ``objective . x`` s.t. ``matrix[i] . x  senses[i]  rhs[i]``, ``lower <= x <= upper``.

    ``None`` in ``lower``/``upper`` means unbounded on that side.
    """

    objective: tuple[Fraction, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    senses: tuple[str, ...]
    rhs: tuple[Fraction, ...]
    lower: tuple[Fraction | None, ...]
    upper: tuple[Fraction | None, ...]
    maximize: bool = True

    @classmethod
    def build(
        cls,
        objective: Sequence,
        matrix: Sequence[Sequence],
        senses: Sequence[str],
        rhs: Sequence,
        lower: Sequence | None = None,
        upper: Sequence | None = None,
        maximize: bool = True,
    ) -> LPInstance:
        n = len(objective)
        m = len(matrix)
        if len(senses) != m or len(rhs) != m:
            raise StructuralError(f"{m} constraint rows but {len(senses)} senses and {len(rhs)} right-hand sides")
        for i, row in enumerate(matrix):
            if len(row) != n:
                raise StructuralError(f"row {i} has {len(row)} coefficients, expected {n}")
        for s in senses:
            if s not in SENSES:
                raise StructuralError(f"unknown constraint sense {s!r}")
        lower = [0] * n if lower is None else list(lower)
        upper = [None] * n if upper is None else list(upper)
        if len(lower) != n or len(upper) != n:
            raise StructuralError("bounds must have one entry per variable")
        return cls(
            tuple(_frac(c) for c in objective),
            tuple(tuple(_frac(a) for a in row) for row in matrix),
            tuple(senses),
            tuple(_frac(b) for b in rhs),
            tuple(None if v is None else _frac(v) for v in lower),
            tuple(None if v is None else _frac(v) for v in upper),
            bool(maximize),
        )

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.matrix)

    def scaled(self, row_factors: Sequence[Fraction], objective_factor: Fraction = Fraction(1)) -> LPInstance:
        """Copy with each row (and its rhs) multiplied by a positive factor."""
        if any(_frac(f) <= 0 for f in row_factors) or _frac(objective_factor) <= 0:
            raise StructuralError("scaling factors must be positive")
        return LPInstance(
            tuple(objective_factor * c for c in self.objective),
            tuple(tuple(f * a for a in row) for f, row in zip(row_factors, self.matrix)),
            self.senses,
            tuple(f * b for f, b in zip(row_factors, self.rhs)),
            self.lower,
            self.upper,
            self.maximize,
        )


@dataclass(frozen=True)
class LPSolution:
    status: str
    value: Fraction | None = None
    primal: tuple[Fraction, ...] = ()
    dual: tuple[Fraction, ...] = ()
    pivots: int = 0


class _StandardForm:
    """max c.x'  s.t.  A x' = b,  x' >= 0,  b >= 0, with slack/artificial bookkeeping."""

    def __init__(self, lp: LPInstance):
        sign = 1 if lp.maximize else -1
        n = lp.num_vars
        # each original variable -> list of (column, coefficient) plus a constant offset
        self.var_map: list[tuple[list[tuple[int, int]], Fraction]] = []
        cols: list[list[Fraction]] = []  # column-major structural coefficients per original row
        cost: list[Fraction] = []
        self.const = _ZERO
        rows = [list(r) for r in lp.matrix]
        rhs = list(lp.rhs)
        extra_rows: list[tuple[int, str, Fraction]] = []  # (column, sense, rhs) simple bound rows

        def new_col(j: int, coef: int) -> int:
            cols.append([coef * rows[i][j] for i in range(lp.num_rows)])
            cost.append(coef * sign * lp.objective[j])
            return len(cols) - 1

        for j in range(n):
            lo, hi = lp.lower[j], lp.upper[j]
            if lo is not None:
                c = new_col(j, 1)
                self.var_map.append(([(c, 1)], lo))
                if lo != 0:
                    for i in range(lp.num_rows):
                        rhs[i] -= rows[i][j] * lo
                    self.const += sign * lp.objective[j] * lo
                if hi is not None:
                    extra_rows.append((c, LE, hi - lo))
            elif hi is not None:
                c = new_col(j, -1)
                self.var_map.append(([(c, -1)], hi))
                if hi != 0:
                    for i in range(lp.num_rows):
                        rhs[i] -= rows[i][j] * hi
                    self.const += sign * lp.objective[j] * hi
            else:
                cp = new_col(j, 1)
                cm = new_col(j, -1)
                self.var_map.append(([(cp, 1), (cm, -1)], _ZERO))

        ns = len(cols)
        row_list: list[tuple[list[Fraction], str, Fraction]] = []
        for i in range(lp.num_rows):
            row_list.append(([cols[c][i] for c in range(ns)], lp.senses[i], rhs[i]))
        for c, sense, b in extra_rows:
            coeffs = [_ZERO] * ns
            coeffs[c] = Fraction(1)
            row_list.append((coeffs, sense, b))

        self.num_orig_rows = lp.num_rows
        self.num_struct = ns
        self.row_sign: list[int] = []
        senses: list[str] = []
        for k, (coeffs, sense, b) in enumerate(row_list):
            if b < 0:
                row_list[k] = ([-a for a in coeffs], {LE: GE, GE: LE, EQ: EQ}[sense], -b)
                self.row_sign.append(-1)
            else:
                self.row_sign.append(1)
            senses.append(row_list[k][1])

        m = len(row_list)
        n_slack = sum(1 for s in senses if s != EQ)
        n_art = sum(1 for s in senses if s != LE)
        width = ns + n_slack + n_art
        self.num_cols = width
        self.art_start = ns + n_slack
        self.tableau: list[list[Fraction]] = []
        self.basis: list[int] = []
        self.ident: list[int] = []
        s_next, a_next = ns, ns + n_slack
        for coeffs, sense, b in row_list:
            row = coeffs + [_ZERO] * (n_slack + n_art) + [b]
            if sense == LE:
                row[s_next] = Fraction(1)
                self.basis.append(s_next)
                self.ident.append(s_next)
                s_next += 1
            else:
                if sense == GE:
                    row[s_next] = Fraction(-1)
                    s_next += 1
                row[a_next] = Fraction(1)
                self.basis.append(a_next)
                self.ident.append(a_next)
                a_next += 1
            self.tableau.append(row)
        self.cost = cost + [_ZERO] * (n_slack + n_art)
        self.m = m
        self.pivots = 0

    # -- simplex machinery ----------------------------------------------------

    def _reduced_costs(self, cost: Sequence[Fraction]) -> list[Fraction]:
        z = [-c for c in cost] + [_ZERO]
        for i, bv in enumerate(self.basis):
            cb = cost[bv]
            if cb:
                row = self.tableau[i]
                for j, a in enumerate(row):
                    if a:
                        z[j] += cb * a
        return z

    def _pivot(self, r: int, col: int, z: list[Fraction]) -> None:
        T = self.tableau
        prow = T[r]
        piv = prow[col]
        if piv != 1:
            prow = [a / piv for a in prow]
            T[r] = prow
        nz = [j for j, a in enumerate(prow) if a]
        for i, row in enumerate(T):
            if i != r:
                f = row[col]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
        f = z[col]
        if f:
            for j in nz:
                z[j] -= f * prow[j]
        self.basis[r] = col
        self.pivots += 1

    def _iterate(self, z: list[Fraction], allowed: int) -> bool:
        """Run Bland pivots until optimal (True) or unbounded (False)."""
        T = self.tableau
        while True:
            col = next((j for j in range(allowed) if z[j] < 0), None)
            if col is None:
                return True
            best = None
            for i, row in enumerate(T):
                a = row[col]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self._pivot(best[1], col, z)

    def solve(self) -> tuple[str, list[Fraction]]:
        """Returns (status, standard-form values); afterwards ``self.z`` holds phase-2 reduced costs."""
        if self.art_start < self.num_cols:
            phase1 = [_ZERO] * self.num_cols
            for j in range(self.art_start, self.num_cols):
                phase1[j] = Fraction(-1)
            z = self._reduced_costs(phase1)
            self._iterate(z, self.num_cols)
            if z[-1] < 0:
                return INFEASIBLE, []
            # drive zero-level artificials out of the basis where possible
            for r, bv in enumerate(self.basis):
                if bv >= self.art_start:
                    row = self.tableau[r]
                    col = next((j for j in range(self.art_start) if row[j]), None)
                    if col is not None:
                        self._pivot(r, col, z)
        z = self._reduced_costs(self.cost)
        # artificials never re-enter; redundant rows keep theirs basic at level zero
        if not self._iterate(z, self.art_start):
            return UNBOUNDED, []
        self.z = z
        x = [_ZERO] * self.num_cols
        for i, bv in enumerate(self.basis):
            x[bv] = self.tableau[i][-1]
        return OPTIMAL, x


def solve(lp: LPInstance) -> LPSolution:
    """Solve ``lp`` exactly; see the module docstring for conventions."""
    sf = _StandardForm(lp)
    status, xs = sf.solve()
    if status != OPTIMAL:
        return LPSolution(status, pivots=sf.pivots)
    primal = []
    for cols, offset in sf.var_map:
        primal.append(offset + sum((coef * xs[c] for c, coef in cols), _ZERO))
    value = sum((c * x for c, x in zip(lp.objective, primal)), _ZERO)
    sign = 1 if lp.maximize else -1
    # y'_i = c_B B^-1 e_i, read from the reduced cost of row i's initial identity column
    dual = tuple(sign * sf.row_sign[i] * (sf.z[sf.ident[i]] + sf.cost[sf.ident[i]]) for i in range(sf.num_orig_rows))
    return LPSolution(OPTIMAL, value, tuple(primal), dual, sf.pivots)


def primal_feasible(lp: LPInstance, x: Sequence[Fraction]) -> bool:
    if len(x) != lp.num_vars:
        return False
    for j, v in enumerate(x):
        if lp.lower[j] is not None and v < lp.lower[j]:
            return False
        if lp.upper[j] is not None and v > lp.upper[j]:
            return False
    for row, sense, b in zip(lp.matrix, lp.senses, lp.rhs):
        lhs = sum((a * v for a, v in zip(row, x)), _ZERO)
        if sense == LE and lhs > b or sense == GE and lhs < b or sense == EQ and lhs != b:
            return False
    return True


def dual_objective(lp: LPInstance, y: Sequence[Fraction]) -> Fraction | None:
    """Best dual objective attainable with row duals ``y`` (bound duals chosen optimally).

    Returns ``None`` if ``y`` cannot be completed to a dual-feasible point.
    """
    if len(y) != lp.num_rows:
        return None
    sign = 1 if lp.maximize else -1
    # work in the maximisation frame
    yy = [sign * v for v in y]
    for sense, v in zip(lp.senses, yy):
        if sense == LE and v < 0 or sense == GE and v > 0:
            return None
    total = sum((b * v for b, v in zip(lp.rhs, yy)), _ZERO)
    for j in range(lp.num_vars):
        d = sign * lp.objective[j] - sum((lp.matrix[i][j] * yy[i] for i in range(lp.num_rows)), _ZERO)
        if d > 0:
            if lp.upper[j] is None:
                return None
            total += lp.upper[j] * d
        elif d < 0:
            if lp.lower[j] is None:
                return None
            total += lp.lower[j] * d
    return sign * total


def verify(lp: LPInstance, sol: LPSolution) -> bool:
    """Independent check of an optimal solution: both feasibilities plus exact value equality."""
    if sol.status != OPTIMAL or sol.value is None:
        return False
    if not primal_feasible(lp, sol.primal):
        return False
    primal_value = sum((c * v for c, v in zip(lp.objective, sol.primal)), _ZERO)
    if primal_value != sol.value:
        return False
    return dual_objective(lp, sol.dual) == sol.value
