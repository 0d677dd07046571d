"""Intersection numbers of families in a finite set algebra.

For a sequence ``s`` of members, ``i(s)`` is the size of the largest
subsequence with nonzero meet, and ``I(A)`` is the infimum of ``i(s)/|s|``
over all finite sequences from ``A``. In a set algebra a subfamily has
nonzero meet iff some atom lies in all of its members, so ``i(s)`` is just
the largest number of members (with multiplicity) sharing one atom. Every
finite Boolean algebra is a set algebra over its atoms, so nothing is lost.

By LP duality,

    I(A) = max_mu  min_{a in A} mu(a)  =  min_w  max_x  sum_{a contains x} w(a)

where ``mu`` ranges over probability measures on the atoms and ``w`` over
probability weightings of ``A``. A rational optimal ``w`` with denominators
cleared is a finite sequence attaining the infimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, lcm
from typing import Mapping

from . import budget as _budget
from .algebra import Family
from .errors import BudgetError, DomainError, StructuralError
from .lp import GE, EQ, OPTIMAL, LPInstance, solve, verify
from .measures import Measure

EMPTY_ONE = "one"
EMPTY_ERROR = "error"


@dataclass(frozen=True)
class WeightedSequence:
    """A finite sequence from a family, recorded as multiplicities per member index."""

    family: Family
    multiplicities: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        mult = {int(i): int(k) for i, k in sorted(self.multiplicities.items()) if k}
        for i, k in mult.items():
            if not 0 <= i < len(self.family):
                raise StructuralError(f"sequence index {i} out of range for a family of size {len(self.family)}")
            if k < 0:
                raise DomainError(f"negative multiplicity {k} at index {i}")
        object.__setattr__(self, "multiplicities", mult)

    def __len__(self) -> int:
        return sum(self.multiplicities.values())

    def ratio(self) -> Fraction:
        return Fraction(intersection_index(self), len(self))


def intersection_index(s: WeightedSequence) -> int:
    """``i(s)``: the largest total multiplicity of members sharing a common atom."""
    if len(s) == 0:
        raise DomainError("i(s) is undefined for the empty sequence")
    masks = s.family.masks
    best = 0
    for x in range(s.family.ground.size):
        bit = 1 << x
        hits = sum(k for i, k in s.multiplicities.items() if masks[i] & bit)
        best = max(best, hits)
    return best


@dataclass(frozen=True)
class IntersectionCertificate:
    value: Fraction
    witness_measure: Measure | None
    witness_sequence: WeightedSequence | None
    lp_verified: bool


def intersection_lp(f: Family) -> LPInstance:
    """maximise t  s.t.  mu(a) - t >= 0 for each member a,  sum mu = 1,  mu, t >= 0.

    Variables are the atom weights followed by ``t``.
    """
    n = f.ground.size
    rows = []
    for a in f:
        row = [int(a.mask >> x & 1) for x in range(n)] + [-1]
        rows.append(row)
    rows.append([1] * n + [0])
    senses = [GE] * len(f) + [EQ]
    rhs = [0] * len(f) + [1]
    return LPInstance.build([0] * n + [1], rows, senses, rhs)


def _integer_multiplicities(weights: list[Fraction]) -> dict[int, int]:
    den = lcm(*(w.denominator for w in weights if w))
    ints = {i: int(w * den) for i, w in enumerate(weights) if w}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    return {i: v // g for i, v in ints.items()}


def intersection_number_exact(f: Family, *, empty: str = EMPTY_ONE) -> IntersectionCertificate:
    """Exact ``I(f)`` with a witness measure (primal) and witness sequence (dual)."""
    if len(f) == 0:
        if empty == EMPTY_ERROR:
            raise DomainError("intersection number of the empty family requested with empty='error'")
        return IntersectionCertificate(Fraction(1), None, None, True)
    for i, a in enumerate(f):
        if a.is_zero():
            raise DomainError(f"elements[{i}] is the zero element")
    lp = intersection_lp(f)
    sol = solve(lp)
    if sol.status != OPTIMAL:
        raise RuntimeError(f"intersection LP reported {sol.status}; this LP is always feasible and bounded")
    n = f.ground.size
    measure = Measure(f.ground, sol.primal[:n])
    weights = [-y for y in sol.dual[: len(f)]]
    seq = WeightedSequence(f, _integer_multiplicities(weights))
    cert = IntersectionCertificate(sol.value, measure, seq, verify(lp, sol))
    if not cert.lp_verified or not verify_certificate(cert, f):
        raise RuntimeError("internal error: intersection certificate failed its own verification")
    return cert


def multiset_count(m: int, L: int) -> int:
    """Number of nonempty multisets of total size <= L over m members."""
    return comb(m + L, L) - 1


def intersection_number_bruteforce(f: Family, L: int, *, budget: int | None = None) -> tuple[Fraction, WeightedSequence]:
    """Minimum of ``i(s)/|s|`` over every multiset from ``f`` of total size 1..L.

    Raises :class:`BudgetError` up front when the multiset count exceeds the
    budget; never truncates silently.
    """
    if len(f) == 0:
        raise DomainError("brute force needs a nonempty family")
    if L < 1:
        raise DomainError(f"L must be >= 1, got {L}")
    cap = _budget.resolve(budget, _budget.BRUTEFORCE_BUDGET)
    count = multiset_count(len(f), L)
    if count > cap:
        raise BudgetError(
            f"brute force over {len(f)} members up to length {L} needs {count} multisets (budget {cap})",
            budget=cap,
            used=count,
        )
    atoms_of = [a.atoms for a in f]
    m = len(f)
    counts = [0] * f.ground.size
    mult = [0] * m
    best: list = [Fraction(2), None]

    def visit(start: int, size: int) -> None:
        for i in range(start, m):
            for x in atoms_of[i]:
                counts[x] += 1
            mult[i] += 1
            r = Fraction(max(counts), size + 1)
            if r < best[0]:
                best[0] = r
                best[1] = {j: k for j, k in enumerate(mult) if k}
            if size + 1 < L:
                visit(i, size + 1)
            mult[i] -= 1
            for x in atoms_of[i]:
                counts[x] -= 1

    visit(0, 0)
    return best[0], WeightedSequence(f, best[1])


def verify_certificate(cert: IntersectionCertificate, f: Family) -> bool:
    """Recompute both witness sides and check they equal ``cert.value`` exactly."""
    if len(f) == 0:
        return cert.value == 1
    mu, seq = cert.witness_measure, cert.witness_sequence
    if mu is None or seq is None or mu.ground != f.ground:
        return False
    if seq.family != f or len(seq) == 0:
        return False
    return mu.min_over(f) == cert.value and seq.ratio() == cert.value
