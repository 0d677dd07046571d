"""Finite set algebras: ground sets, elements, families and structural diagnostics.

Every finite Boolean algebra is (isomorphic to) the power set of its atoms, so
an element is stored as a bit mask over the atoms of a :class:`GroundSet`.
Python integers are unbounded, so there is no hard width limit; the exact LP
suites are only exercised on grounds of up to 64 atoms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, StructuralError

#: Families up to this size are decided exhaustively by :func:`is_centered`.
DEFAULT_CENTERED_BOUND = 20


@dataclass(frozen=True)
class GroundSet:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.size, int) or isinstance(self.size, bool) or self.size < 1:
            raise DomainError(f"ground: size must be a positive integer, got {self.size!r}")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.size:
                raise StructuralError(f"labels: expected {self.size} labels, got {len(labels)}")
            if len(set(labels)) != len(labels):
                raise StructuralError("labels: labels must be distinct")

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def element(self, atoms: Iterable[int]) -> Element:
        return Element.from_atoms(self, atoms)

    def atoms(self) -> list[Element]:
        return [Element(self, 1 << x) for x in range(self.size)]

    def top(self) -> Element:
        return Element(self, self.full_mask)

    def bottom(self) -> Element:
        return Element(self, 0)


@dataclass(frozen=True)
class Element:
    """A member of the set algebra P(atoms), stored as a bit mask."""

    ground: GroundSet
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.ground.size:
            raise StructuralError(f"element mask {self.mask:#x} has atoms outside [0, {self.ground.size})")

    @classmethod
    def from_atoms(cls, ground: GroundSet, atoms: Iterable[int]) -> Element:
        mask = 0
        for x in atoms:
            if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < ground.size:
                raise StructuralError(f"atom index {x!r} out of range [0, {ground.size})")
            mask |= 1 << x
        return cls(ground, mask)

    @property
    def atoms(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.ground.size) if self.mask >> x & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def is_zero(self) -> bool:
        return self.mask == 0

    def __and__(self, other: Element) -> Element:
        return meet(self, other)

    def __or__(self, other: Element) -> Element:
        return join(self, other)

    def __invert__(self) -> Element:
        return complement(self)

    def __repr__(self) -> str:
        return f"Element({set(self.atoms) or '{}'})"


def _check_same(a: Element, b: Element) -> None:
    if a.ground != b.ground:
        raise StructuralError("elements live over different ground sets")


def meet(a: Element, b: Element) -> Element:
    _check_same(a, b)
    return Element(a.ground, a.mask & b.mask)


def join(a: Element, b: Element) -> Element:
    _check_same(a, b)
    return Element(a.ground, a.mask | b.mask)


def complement(a: Element) -> Element:
    return Element(a.ground, a.ground.full_mask & ~a.mask)


@dataclass(frozen=True)
class Family:
    """An ordered list of nonzero elements over one ground set.

    Duplicates are kept unless ``dedup=True`` was requested at construction;
    in that case the first occurrence of each element survives.
    """

    ground: GroundSet
    elements: tuple[Element, ...] = ()
    dedup: bool = False

    def __post_init__(self):
        elements = tuple(self.elements)
        for i, e in enumerate(elements):
            if e.ground != self.ground:
                raise StructuralError(f"elements[{i}]: element lives over a different ground set")
            if e.is_zero():
                raise DomainError(f"elements[{i}]: the zero element is not allowed in a family")
        if self.dedup:
            seen: set[int] = set()
            kept = []
            for e in elements:
                if e.mask not in seen:
                    seen.add(e.mask)
                    kept.append(e)
            elements = tuple(kept)
        object.__setattr__(self, "elements", elements)

    @classmethod
    def from_atom_lists(cls, ground: GroundSet | int, atom_lists: Iterable[Iterable[int]], dedup: bool = False) -> Family:
        if isinstance(ground, int):
            ground = GroundSet(ground)
        return cls(ground, tuple(Element.from_atoms(ground, a) for a in atom_lists), dedup)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __getitem__(self, i: int) -> Element:
        return self.elements[i]

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(e.mask for e in self.elements)

    def subfamily(self, indices: Iterable[int]) -> Family:
        idx = list(indices)
        for i in idx:
            if not isinstance(i, int) or not 0 <= i < len(self.elements):
                raise StructuralError(f"index {i!r} out of range for a family of size {len(self.elements)}")
        return Family(self.ground, tuple(self.elements[i] for i in idx))

    def atom_lists(self) -> list[list[int]]:
        return [list(e.atoms) for e in self.elements]


def is_antichain(f: Family) -> bool:
    """True iff distinct members are pairwise disjoint."""
    masks = f.masks
    return all(masks[i] & masks[j] == 0 for i, j in combinations(range(len(masks)), 2))


def is_centered(f: Family, bound: int | None = None) -> bool | None:
    """Decide whether every finite subfamily of ``f`` has nonzero meet.

    Subfamilies of size at most ``bound`` (default: exhaustive when
    ``len(f) <= DEFAULT_CENTERED_BOUND``) are examined. Returns ``None`` when
    the bound is too small to decide; a nonempty global meet always decides
    ``True`` and an empty meet of a checked subfamily always decides ``False``.
    """
    masks = f.masks
    if not masks:
        return True
    if bound is None:
        bound = DEFAULT_CENTERED_BOUND
    common = f.ground.full_mask
    for m in masks:
        common &= m
    if common:
        return True
    if bound >= len(masks):
        return False
    distinct = sorted(set(masks))
    for k in range(2, min(bound, len(distinct)) + 1):
        for combo in combinations(distinct, k):
            acc = f.ground.full_mask
            for m in combo:
                acc &= m
                if not acc:
                    break
            if not acc:
                return False
    return None


@dataclass(frozen=True)
class Quotient:
    """The set algebra on the atoms that survive a (principal) ideal."""

    source: GroundSet
    ground: GroundSet
    surviving: tuple[int, ...]
    _index: dict = field(repr=False, compare=False, default_factory=dict)

    def project(self, a: Element) -> Element:
        if a.ground != self.source:
            raise StructuralError("element does not live over the quotient's source ground")
        return Element.from_atoms(self.ground, (self._index[x] for x in a.atoms if x in self._index))

    def project_family(self, f: Family) -> Family:
        """Project every member; members that vanish in the quotient are dropped."""
        images = (self.project(a) for a in f)
        return Family(self.ground, tuple(e for e in images if not e.is_zero()))


def quotient_by_ideal(ground: GroundSet, ideal_generators: Sequence[Element]) -> Quotient:
    """Quotient of P(atoms) by the ideal generated by ``ideal_generators``.

    A finitely generated ideal of a finite set algebra is principal, so the
    quotient is the set algebra on the atoms outside the union of generators.
    """
    killed = 0
    for g in ideal_generators:
        if g.ground != ground:
            raise StructuralError("ideal generator lives over a different ground set")
        killed |= g.mask
    if killed == ground.full_mask:
        raise DomainError("improper ideal: the generators cover every atom")
    surviving = tuple(x for x in range(ground.size) if not killed >> x & 1)
    if ground.labels is not None:
        labels = tuple(ground.labels[x] for x in surviving)
    else:
        labels = None
    new_ground = GroundSet(len(surviving), labels)
    return Quotient(ground, new_ground, surviving, {x: i for i, x in enumerate(surviving)})


# -- canonical family file ---------------------------------------------------


def family_to_dict(f: Family) -> dict:
    d: dict = {"ground": f.ground.size}
    if f.ground.labels is not None:
        d["labels"] = list(f.ground.labels)
    d["elements"] = f.atom_lists()
    return d


def family_from_dict(d: dict, *, dedup: bool = False) -> Family:
    """Build a family from the canonical instance dict, naming the offending field on error."""
    if not isinstance(d, dict):
        raise StructuralError("instance: expected a JSON object")
    if "ground" not in d:
        raise StructuralError("ground: missing field")
    size = d["ground"]
    if not isinstance(size, int) or isinstance(size, bool) or size < 1:
        raise DomainError(f"ground: expected a positive integer, got {size!r}")
    labels = d.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise StructuralError("labels: expected a list of strings")
    ground = GroundSet(size, tuple(labels) if labels is not None else None)
    elements = d.get("elements", [])
    if not isinstance(elements, list):
        raise StructuralError("elements: expected a list of atom-index lists")
    out = []
    for i, atoms in enumerate(elements):
        if not isinstance(atoms, list):
            raise StructuralError(f"elements[{i}]: expected a list of atom indices")
        try:
            e = Element.from_atoms(ground, atoms)
        except StructuralError as exc:
            raise StructuralError(f"elements[{i}]: {exc}") from None
        if e.is_zero():
            raise DomainError(f"elements[{i}]: empty element (members must be nonzero)")
        out.append(e)
    return Family(ground, tuple(out), dedup)


def dumps_family(f: Family) -> str:
    return json.dumps(family_to_dict(f), sort_keys=True) + "\n"


def loads_family(text: str, *, dedup: bool = False) -> Family:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"instance: invalid JSON ({exc})") from None
    return family_from_dict(d, dedup=dedup)


def full_algebra_positive(ground: GroundSet | int) -> Family:
    """B+ of the full algebra: every nonzero subset of the atoms, ordered by mask."""
    if isinstance(ground, int):
        ground = GroundSet(ground)
    return Family(ground, tuple(Element(ground, m) for m in range(1, ground.full_mask + 1)))
