"""Finitely additive probability measures on a finite set algebra."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import Element, Family, GroundSet
from .errors import DomainError, StructuralError


@dataclass(frozen=True)
class Measure:
    """Exact atom weights; ``mu(a)`` is the sum of the weights of the atoms of ``a``."""

    ground: GroundSet
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        w = tuple(Fraction(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != self.ground.size:
            raise StructuralError(f"measure has {len(w)} weights for a ground of {self.ground.size} atoms")
        if any(v < 0 for v in w):
            raise DomainError("measure weights must be nonnegative")
        if sum(w) != 1:
            raise DomainError(f"measure weights sum to {sum(w)}, not 1")

    @classmethod
    def uniform(cls, ground: GroundSet) -> Measure:
        return cls(ground, (Fraction(1, ground.size),) * ground.size)

    @classmethod
    def point_mass(cls, ground: GroundSet, atom: int) -> Measure:
        if not 0 <= atom < ground.size:
            raise StructuralError(f"atom {atom} out of range")
        return cls(ground, tuple(Fraction(int(x == atom)) for x in range(ground.size)))

    def __call__(self, a: Element) -> Fraction:
        if a.ground != self.ground:
            raise StructuralError("element and measure live over different ground sets")
        w = self.weights
        return sum((w[x] for x in a.atoms), Fraction(0))

    def min_over(self, elements: Iterable[Element]) -> Fraction | None:
        vals = [self(a) for a in elements]
        return min(vals) if vals else None


def is_strictly_positive(mu: Measure, f: Family | None = None) -> bool:
    """``mu(a) > 0`` for every member of ``f``; with ``f=None``, for all of B+ (every atom)."""
    if f is None:
        return all(w > 0 for w in mu.weights)
    return all(mu(a) > 0 for a in f)
