"""Both directions of Kelley's theorem on finite instances.

* cover -> measure: :func:`synthesize_measure_from_cover` averages the class
  witnesses with weights ``2**-j`` (classes numbered from 1) and renormalises.
* measure -> cover: :func:`cover_from_measure` slices a family by measure
  thresholds. If every member of ``C`` has ``mu(a) >= q`` then for any sequence
  ``s`` from ``C`` some atom is hit by members of total multiplicity at least
  ``q |s|``, so ``I(C) >= q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .algebra import Family
from .errors import CertificateError, DomainError, StructuralError
from .intersection import intersection_number_exact
from .measures import Measure, is_strictly_positive


@dataclass(frozen=True)
class CoverCertificate:
    """Classes of member indices, each with a threshold and a witness measure.

    The constructor checks the structure only; :meth:`verify_class` checks the
    witness inequalities.
    """

    family: Family
    classes: tuple[tuple[int, ...], ...]
    thresholds: tuple[Fraction, ...]
    witnesses: tuple[Measure, ...]
    covers_all: bool | None = None

    def __post_init__(self):
        classes = tuple(tuple(c) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "thresholds", tuple(Fraction(t) for t in self.thresholds))
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        if not len(classes) == len(self.thresholds) == len(self.witnesses):
            raise StructuralError("classes, thresholds and witnesses must have equal lengths")
        m = len(self.family)
        seen: set[int] = set()
        for j, cls in enumerate(classes):
            if not cls:
                raise StructuralError(f"class {j} is empty")
            for i in cls:
                if not isinstance(i, int) or not 0 <= i < m:
                    raise StructuralError(f"class {j}: element index {i!r} out of range for a family of size {m}")
            seen.update(cls)
        for j, mu in enumerate(self.witnesses):
            if mu.ground != self.family.ground:
                raise StructuralError(f"class {j}: witness measure lives over a different ground set")
        full = len(seen) == m
        if self.covers_all is None:
            object.__setattr__(self, "covers_all", full)
        elif self.covers_all and not full:
            missing = sorted(set(range(m)) - seen)
            raise StructuralError(f"cover claims to cover every element but misses indices {missing}")

    def verify_class(self, j: int) -> bool:
        mu, q = self.witnesses[j], self.thresholds[j]
        return all(mu(self.family[i]) >= q for i in self.classes[j])


class SynthesisResult(NamedTuple):
    measure: Measure
    normalization: Fraction
    class_bounds: tuple[Fraction, ...]
    strictly_positive: bool


def synthesize_measure_from_cover(cover: CoverCertificate) -> SynthesisResult:
    """Glue class witnesses into one measure ``c * sum_j 2**-j * witnesses[j]``.

    For ``a`` in class ``j`` the result satisfies
    ``mu(a) >= c * 2**-j * thresholds[j]``; these bounds are returned in
    ``class_bounds``. ``strictly_positive`` is evaluated on the full algebra.
    """
    if not cover.classes:
        raise DomainError("cannot synthesise a measure from a cover with no classes")
    for j, q in enumerate(cover.thresholds):
        if q <= 0:
            raise DomainError(f"class {j}: threshold {q} is not positive")
    for j in range(len(cover.classes)):
        if not cover.verify_class(j):
            raise CertificateError(f"class {j}: witness measure falls below threshold {cover.thresholds[j]}", class_index=j)
    ground = cover.family.ground
    coeffs = [Fraction(1, 2 ** (j + 1)) for j in range(len(cover.classes))]
    c = 1 / sum(coeffs)
    weights = [Fraction(0)] * ground.size
    for coef, mu in zip(coeffs, cover.witnesses):
        for x, w in enumerate(mu.weights):
            weights[x] += c * coef * w
    measure = Measure(ground, tuple(weights))
    bounds = tuple(c * coef * q for coef, q in zip(coeffs, cover.thresholds))
    return SynthesisResult(measure, c, bounds, is_strictly_positive(measure))


def cover_from_measure(mu: Measure, f: Family, grid: Sequence[Fraction]) -> CoverCertificate:
    """Classes ``C_q = {a : mu(a) >= q}`` for each ``q`` in a descending grid; empty ones dropped."""
    grid = [Fraction(q) for q in grid]
    if not grid:
        raise DomainError("grid must be nonempty")
    if any(not 0 < q <= 1 for q in grid):
        raise DomainError("grid values must lie in (0, 1]")
    if any(a <= b for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be strictly descending")
    if mu.ground != f.ground:
        raise StructuralError("measure and family live over different ground sets")
    values = [mu(a) for a in f]
    classes, thresholds = [], []
    for q in grid:
        cls = tuple(i for i, v in enumerate(values) if v >= q)
        if cls:
            classes.append(cls)
            thresholds.append(q)
    covers_all = all(v >= grid[-1] for v in values)
    return CoverCertificate(f, tuple(classes), tuple(thresholds), (mu,) * len(classes), covers_all)


class ClassFeasibility(NamedTuple):
    feasible: bool
    witness: Measure | None
    value: Fraction


def class_feasible(f: Family, class_indices: Sequence[int], delta: Fraction, strict: bool = True) -> ClassFeasibility:
    """Is ``I(class) > delta`` (or ``>=`` when ``strict=False``)? The optimal measure is the witness."""
    if not class_indices:
        raise DomainError("class must be nonempty")
    cert = intersection_number_exact(f.subfamily(class_indices))
    ok = cert.value > delta if strict else cert.value >= delta
    return ClassFeasibility(ok, cert.witness_measure if ok else None, cert.value)
