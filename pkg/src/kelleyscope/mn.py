"""Minimal covers of a family by classes with intersection number above ``1 - epsilon``.

A class is *feasible* when its intersection number exceeds ``delta = 1 - epsilon``
(strictly, by default). Feasibility is inherited by subclasses, so

* exact mode stops at the greedy cover when it meets the pairwise-conflict
  lower bound; otherwise it enumerates the maximal feasible classes (a Bron-Kerbosch style
  search over a hereditary family) and then solves set cover over them by
  branch and bound;
* greedy mode grows one class at a time, element by element, rechecking
  feasibility, and keeps the largest class found from any seed.

Duplicated members are merged before the search and put back afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import budget as _budget
from .algebra import Element, Family
from .errors import BudgetError, DomainError
from .intersection import intersection_number_exact
from .kelley import CoverCertificate
from .measures import Measure

EXACT, GREEDY = "exact", "greedy"


@dataclass(frozen=True)
class MNReport:
    epsilon: Fraction
    k: int
    certificate: CoverCertificate
    mode: str
    optimal: bool
    strict: bool = True
    stats: dict = field(default_factory=dict, compare=False)


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


class _Feasibility:
    """Memoised ``I(S) > delta`` over subsets of the distinct members, keyed by bit mask."""

    def __init__(self, masks: list[int], ground, delta: Fraction, strict: bool):
        self.masks = masks
        self.ground = ground
        self.delta = delta
        self.strict = strict
        self.cache: dict[int, Measure | None] = {}
        self.refuters: list[int] = []  # supports of sequences proving infeasibility
        self.witnesses: list[tuple[int, Measure]] = []  # (members the measure certifies, measure)
        self.lp_calls = 0
        self.checks = 0

    def _beats(self, v: Fraction) -> bool:
        return v > self.delta if self.strict else v >= self.delta

    def witness_ok(self, mu: Measure, sel: int) -> bool:
        return all(self._beats(mu(self._elem(i))) for i in _bits(sel))

    def _elem(self, i: int) -> Element:
        return Element(self.ground, self.masks[i])

    def _refuted(self, sel: int) -> bool:
        """Cheap exact infeasibility: a known infeasible subset inside, or the flat sequence fails."""
        if any(t & sel == t for t in self.refuters):
            return True
        size = sel.bit_count()
        degree = [0] * self.ground.size
        for i in _bits(sel):
            for x in _bits(self.masks[i]):
                degree[x] += 1
        # listing each member once is a sequence, so I(S) <= max degree / |S|
        return not self._beats(Fraction(max(degree), size))

    def __call__(self, sel: int, hint: Measure | None = None) -> Measure | None:
        """Witness measure if ``sel`` is feasible, else ``None``."""
        if sel in self.cache:
            return self.cache[sel]
        self.checks += 1
        common = self.ground.full_mask
        for i in _bits(sel):
            common &= self.masks[i]
        if common:
            atom = (common & -common).bit_length() - 1
            result = Measure.point_mass(self.ground, atom) if self._beats(Fraction(1)) else None
        elif hint is not None and self.witness_ok(hint, sel):
            result = hint
        elif self._refuted(sel):
            result = None
        elif (known := next((mu for good, mu in self.witnesses if sel & good == sel), None)) is not None:
            result = known
        else:
            self.lp_calls += 1
            members = list(_bits(sel))
            fam = Family(self.ground, tuple(self._elem(i) for i in members))
            cert = intersection_number_exact(fam)
            if self._beats(cert.value):
                result = cert.witness_measure
                good = sum(1 << i for i in range(len(self.masks)) if self._beats(result(self._elem(i))))
                self.witnesses.append((good, result))
            else:
                result = None
                # every superset of the witness sequence's support is infeasible too
                support = 0
                for j in cert.witness_sequence.multiplicities:
                    support |= 1 << members[j]
                self.refuters.append(support)
        self.cache[sel] = result
        return result


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetError(
                f"exact cover search exceeded its node budget ({self.budget}); try --mode greedy",
                budget=self.budget,
                used=self.nodes,
                hint="greedy",
            )


def _maximal_classes(feas: _Feasibility, m: int, counter: _Counter) -> list[int]:
    out: list[int] = []

    def extend(R: int, P: list[int], X: list[int], mu: Measure | None) -> None:
        counter.tick()
        if not P:
            if not X:
                out.append(R)
            return
        union = R
        for v in P:
            union |= 1 << v
        mu_union = feas(union, mu)
        if mu_union is not None:
            # R + P is the unique maximal set below this node
            if not any(feas(union | 1 << x, mu_union) is not None for x in X):
                out.append(union)
            return
        P = list(P)
        X = list(X)
        while P:
            v = P.pop(0)
            R2 = R | 1 << v
            mu2 = feas(R2, mu)
            P2 = [u for u in P if feas(R2 | 1 << u, mu2) is not None]
            X2 = [u for u in X if feas(R2 | 1 << u, mu2) is not None]
            extend(R2, P2, X2, mu2)
            X.append(v)

    start = list(range(m))
    extend(0, start, [], None)
    return out


def _independent_lower_bound(uncovered: int, conflict: list[int]) -> int:
    """Greedy set of pairwise conflicting uncovered members; each needs its own class."""
    chosen = 0
    count = 0
    for i in _bits(uncovered):
        if conflict[i] & chosen == chosen:
            chosen |= 1 << i
            count += 1
    return count


def _greedy_cover(classes: list[int], universe: int) -> list[int]:
    uncovered = universe
    picked = []
    while uncovered:
        best = max(classes, key=lambda c: ((c & uncovered).bit_count(), -classes.index(c)))
        picked.append(best)
        uncovered &= ~best
    return picked


def _exact_set_cover(classes: list[int], universe: int, conflict: list[int], counter: _Counter) -> list[int]:
    best = _greedy_cover(classes, universe)
    containing: dict[int, list[int]] = {}
    for i in _bits(universe):
        containing[i] = [c for c in classes if c >> i & 1]

    def search(uncovered: int, picked: list[int]) -> None:
        nonlocal best
        counter.tick()
        if not uncovered:
            if len(picked) < len(best):
                best = list(picked)
            return
        if len(picked) + _independent_lower_bound(uncovered, conflict) >= len(best):
            return
        pivot = min(_bits(uncovered), key=lambda i: (len(containing[i]), i))
        options = sorted(containing[pivot], key=lambda c: -(c & uncovered).bit_count())
        for c in options:
            picked.append(c)
            search(uncovered & ~c, picked)
            picked.pop()

    search(universe, [])
    return best


def _greedy_classes(feas: _Feasibility, m: int) -> list[int]:
    uncovered = (1 << m) - 1
    picked = []
    while uncovered:
        best_sel, best_size = 0, -1
        for seed in _bits(uncovered):
            sel = 1 << seed
            mu = feas(sel)
            for u in _bits(uncovered):
                if u == seed:
                    continue
                mu2 = feas(sel | 1 << u, mu)
                if mu2 is not None:
                    sel |= 1 << u
                    mu = mu2
            size = sel.bit_count()
            if size > best_size:
                best_sel, best_size = sel, size
        picked.append(best_sel)
        uncovered &= ~best_sel
    return picked


def mn_min_cover(
    f: Family,
    epsilon: Fraction,
    mode: str = EXACT,
    *,
    strict: bool = True,
    budget: int | None = None,
) -> MNReport:
    """Fewest classes, each with intersection number above ``1 - epsilon``, covering ``f``.

    Exact mode raises :class:`BudgetError` when its node budget runs out.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in the open interval (0, 1), got {epsilon}")
    if mode not in (EXACT, GREEDY):
        raise DomainError(f"mode must be 'exact' or 'greedy', got {mode!r}")
    delta = 1 - epsilon
    if len(f) == 0:
        cert = CoverCertificate(f, (), (), (), True)
        return MNReport(epsilon, 0, cert, mode, mode == EXACT, strict, {"nodes": 0, "lp_calls": 0})

    # merge duplicates: distinct index -> original indices
    first: dict[int, int] = {}
    groups: list[list[int]] = []
    for i, a in enumerate(f):
        if a.mask not in first:
            first[a.mask] = len(groups)
            groups.append([])
        groups[first[a.mask]].append(i)
    masks = [f[g[0]].mask for g in groups]
    m = len(masks)
    feas = _Feasibility(masks, f.ground, delta, strict)
    counter = _Counter(_budget.resolve(budget, _budget.COVER_BUDGET))
    universe = (1 << m) - 1

    if mode == EXACT:
        conflict = [0] * m
        for i in range(m):
            for j in range(i + 1, m):
                if feas(1 << i | 1 << j) is None:
                    conflict[i] |= 1 << j
                    conflict[j] |= 1 << i
        lower = _independent_lower_bound(universe, conflict)
        chosen = _greedy_classes(feas, m)
        if len(chosen) > lower:
            maximal = _maximal_classes(feas, m, counter)
            cover = _exact_set_cover(maximal, universe, conflict, counter)
            if len(cover) < len(chosen):
                chosen = cover
    else:
        chosen = _greedy_classes(feas, m)
        lower = None

    # turn the chosen classes into a partition; earlier classes keep shared members
    classes, thresholds, witnesses = [], [], []
    taken = 0
    for sel in chosen:
        mu = feas(sel)
        part = sel & ~taken
        taken |= sel
        if not part:
            continue
        members = sorted(i for d in _bits(part) for i in groups[d])
        classes.append(tuple(members))
        thresholds.append(min(mu(f[i]) for i in members))
        witnesses.append(mu)
    cert = CoverCertificate(f, tuple(classes), tuple(thresholds), tuple(witnesses), True)
    stats = {"distinct": m, "nodes": counter.nodes, "feasibility_checks": feas.checks, "lp_calls": feas.lp_calls}
    if lower is not None:
        stats["lower_bound"] = lower
    return MNReport(epsilon, len(classes), cert, mode, mode == EXACT, strict, stats)


def certificate_is_valid(report: MNReport) -> bool:
    """Recheck every class independently: exact LP value above ``1 - epsilon`` and witness bound."""
    cert = report.certificate
    delta = 1 - report.epsilon
    if not cert.covers_all or len(cert.classes) != report.k:
        return False
    for j, cls in enumerate(cert.classes):
        value = intersection_number_exact(cert.family.subfamily(cls)).value
        if report.strict:
            ok = cert.thresholds[j] > delta and value > delta
        else:
            ok = cert.thresholds[j] >= delta and value >= delta
        if not ok or not cert.verify_class(j):
            return False
    return True
