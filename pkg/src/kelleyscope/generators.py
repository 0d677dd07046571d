"""Reproducible instance catalog.

Randomness comes from one documented stream: numpy's ``PCG64`` bit generator
seeded with the spec's 64-bit seed, consumed only through ``random_raw()``.
Every derived draw (bounded integers, Bernoulli trials, subsets) uses exact
integer arithmetic on those raw words, so a spec materialises to the same
family on every platform and numpy version that keeps PCG64 stable.

Ideals on omega are represented by finite *positivity proxies* on ``[0, N)``:

=========  ==========================================  ==========================
ideal      proxy for "positive" (not in the ideal)      ground
=========  ==========================================  ==========================
density    ``|a| >= ceil(d N)``                         ``N`` atoms
summable   ``sum_{i in a} 1/(i+1) >= theta``            ``N`` atoms
grid       ``>= c`` columns with ``>= r`` points each   ``N x N``, atom ``col*N+row``
=========  ==========================================  ==========================

The proxies are threshold conditions at one truncation; they do not decide
membership in the infinite ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, comb
from typing import Iterator

import numpy as np

from .algebra import Element, Family, GroundSet
from .errors import DomainError
from .rationals import parse, to_str

KINDS = ("atoms", "ksubsets", "intervals", "random", "measure_threshold", "ideal_truncation")
IDEALS = ("density", "summable", "grid")
STRUCTURED, SAMPLED = "structured", "sampled"
U64 = 1 << 64


class Stream:
    """Raw PCG64 words with exact derived draws."""

    def __init__(self, seed: int):
        if not 0 <= seed < U64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self._bg = np.random.PCG64(seed)

    def u64(self) -> int:
        return int(self._bg.random_raw())

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = U64 - U64 % n
        while True:
            r = self.u64()
            if r < limit:
                return r % n

    def bernoulli(self, p: Fraction) -> bool:
        return self.u64() * p.denominator < p.numerator * U64

    def sample(self, n: int, k: int) -> list[int]:
        """Sorted uniform k-subset of ``range(n)`` via partial Fisher-Yates."""
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])

    def permutation(self, n: int) -> list[int]:
        pool = list(range(n))
        for i in range(n - 1):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool


def _int(params: dict, key: str, lo: int = 1) -> int:
    if key not in params:
        raise DomainError(f"params.{key}: missing")
    v = params[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise DomainError(f"params.{key}: expected an integer, got {v!r}")
    if v < lo:
        raise DomainError(f"params.{key}: must be >= {lo}, got {v}")
    return v


def _rat(params: dict, key: str) -> Fraction:
    if key not in params:
        raise DomainError(f"params.{key}: missing")
    return parse(params[key], field=f"params.{key}")


@dataclass(frozen=True)
class IdealSpec:
    name: str
    N: int
    d: Fraction | None = None
    theta: Fraction | None = None
    c: int | None = None
    r: int | None = None

    def __post_init__(self):
        if self.name not in IDEALS:
            raise DomainError(f"ideal: unknown ideal {self.name!r}; expected one of {IDEALS}")
        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 1:
            raise DomainError(f"N: must be a positive integer, got {self.N!r}")
        if self.name == "density":
            if self.d is None or not 0 < self.d < 1:
                raise DomainError(f"d: density must lie in (0, 1), got {self.d}")
        elif self.name == "summable":
            if self.theta is None or self.theta <= 0:
                raise DomainError(f"theta: must be positive, got {self.theta}")
            total = harmonic(self.N)
            if self.theta > total:
                raise DomainError(
                    f"theta: {to_str(self.theta)} exceeds the full weight of [0, {self.N}), "
                    f"H_{self.N} = {to_str(total)} ~ {float(total):.4f}; no set is positive"
                )
        else:
            for key, v in (("c", self.c), ("r", self.r)):
                if v is None or not 1 <= v <= self.N:
                    raise DomainError(f"{key}: must lie in [1, N={self.N}], got {v}")

    @classmethod
    def from_params(cls, params: dict) -> IdealSpec:
        name = params.get("ideal")
        N = _int(params, "N")
        if name == "density":
            return cls(name, N, d=_rat(params, "d"))
        if name == "summable":
            return cls(name, N, theta=_rat(params, "theta"))
        if name == "grid":
            return cls(name, N, c=_int(params, "c"), r=_int(params, "r"))
        raise DomainError(f"params.ideal: unknown ideal {name!r}; expected one of {IDEALS}")

    @property
    def ground_size(self) -> int:
        return self.N * self.N if self.name == "grid" else self.N

    @property
    def min_size(self) -> int:
        """``ceil(d N)`` for the density ideal."""
        return ceil(self.d * self.N)

    def is_positive(self, atoms: Iterator[int] | tuple[int, ...]) -> bool:
        atoms = tuple(atoms)
        if self.name == "density":
            return len(atoms) >= self.min_size
        if self.name == "summable":
            return sum((Fraction(1, i + 1) for i in atoms), Fraction(0)) >= self.theta
        per_col: dict[int, int] = {}
        for a in atoms:
            per_col[a // self.N] = per_col.get(a // self.N, 0) + 1
        return sum(1 for v in per_col.values() if v >= self.r) >= self.c


def harmonic(N: int) -> Fraction:
    return sum((Fraction(1, i + 1) for i in range(N)), Fraction(0))


def _minimal_summable(spec: IdealSpec, limit: int) -> list[tuple[int, ...]] | None:
    """Inclusion-minimal positive sets in lexicographic order; ``None`` if more than ``limit``."""
    N, theta = spec.N, spec.theta
    weights = [Fraction(1, i + 1) for i in range(N)]
    suffix = [Fraction(0)] * (N + 1)
    for i in range(N - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i]
    out: list[tuple[int, ...]] = []

    def dfs(start: int, chosen: list[int], w: Fraction) -> bool:
        for i in range(start, N):
            if w + suffix[i] < theta:
                return True
            nw = w + weights[i]
            chosen.append(i)
            if nw >= theta:
                # w < theta before adding the lightest member i, so the set is minimal
                out.append(tuple(chosen))
                if len(out) > limit:
                    return False
            elif not dfs(i + 1, chosen, nw):
                return False
            chosen.pop()
        return True

    return out if dfs(0, [], Fraction(0)) else None


def _structured_core(spec: IdealSpec, budget: int) -> tuple[list[tuple[int, ...]], bool]:
    """Minimal positive sets if there are at most ``budget`` of them, else the interval/block skeleton.

    Returns ``(sets, complete)``; ``complete`` is False when the fallback was used.
    """
    N = spec.N
    if spec.name == "density":
        k = spec.min_size
        if comb(N, k) <= budget:
            return list(combinations(range(N), k)), True
        return [tuple(range(i, i + k)) for i in range(N - k + 1)], False
    if spec.name == "summable":
        sets = _minimal_summable(spec, budget)
        if sets is not None:
            return sets, True
        out = []
        for i in range(N):
            w = Fraction(0)
            for j in range(i, N):
                w += Fraction(1, j + 1)
                if w >= spec.theta:
                    out.append(tuple(range(i, j + 1)))
                    break
        return out, False
    c, r = spec.c, spec.r
    if comb(N, c) * comb(N, r) ** c <= budget:
        sets = []
        for cols in combinations(range(N), c):
            for rows_per_col in _product_of_combos(N, r, c):
                sets.append(tuple(sorted(col * N + row for col, rows in zip(cols, rows_per_col) for row in rows)))
        return sets, True
    blocks = []
    for i in range(N - c + 1):
        for j in range(N - r + 1):
            blocks.append(tuple(col * N + row for col in range(i, i + c) for row in range(j, j + r)))
    return blocks, False


def _product_of_combos(N: int, r: int, c: int):
    if c == 0:
        yield ()
        return
    for first in combinations(range(N), r):
        for rest in _product_of_combos(N, r, c - 1):
            yield (first,) + rest


def _sample_positive(spec: IdealSpec, rng: Stream) -> tuple[int, ...]:
    N = spec.N
    if spec.name == "density":
        k = spec.min_size
        size = k + rng.below(N - k + 1)
        return tuple(rng.sample(N, size))
    if spec.name == "summable":
        chosen, w = [], Fraction(0)
        for i in rng.permutation(N):
            chosen.append(i)
            w += Fraction(1, i + 1)
            if w >= spec.theta:
                break
        return tuple(sorted(chosen))
    cols = rng.sample(N, spec.c)
    atoms = []
    for col in cols:
        size = spec.r + rng.below(N - spec.r + 1)
        atoms.extend(col * N + row for row in rng.sample(N, size))
    return tuple(sorted(atoms))


def ideal_truncation(ideal: IdealSpec, mode: str = STRUCTURED, budget: int = 40, seed: int = 0) -> Family:
    """Finite family of proxy-positive subsets of the truncation ``[0, N)``.

    ``structured``: all inclusion-minimal positive sets (for density, all
    ``ceil(dN)``-subsets) when there are at most ``budget`` of them; otherwise
    the minimal positive intervals (grid: ``c x r`` blocks) followed by
    ``budget`` seeded samples. ``sampled``: ``budget`` seeded positive sets.
    """
    if mode not in (STRUCTURED, SAMPLED):
        raise DomainError(f"mode: expected 'structured' or 'sampled', got {mode!r}")
    if isinstance(budget, bool) or not isinstance(budget, int) or budget < 0:
        raise DomainError(f"budget: must be a nonnegative integer, got {budget!r}")
    ground = GroundSet(ideal.ground_size)
    rng = Stream(seed)
    if mode == STRUCTURED:
        sets, complete = _structured_core(ideal, budget)
        if not complete:
            sets = sets + [_sample_positive(ideal, rng) for _ in range(budget)]
    else:
        if budget < 1:
            raise DomainError("budget: sampled mode needs budget >= 1")
        sets = [_sample_positive(ideal, rng) for _ in range(budget)]
    if not sets:
        raise DomainError(f"{ideal.name} proxy produced no positive sets at N={ideal.N}")
    for s in sets:
        if not ideal.is_positive(s):
            raise AssertionError(f"generated set {s} fails the {ideal.name} positivity proxy")
    return Family(ground, tuple(Element.from_atoms(ground, s) for s in sets))


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"kind: unknown kind {self.kind!r}; expected one of {KINDS}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < U64:
            raise DomainError(f"seed: must be an unsigned 64-bit integer, got {self.seed!r}")
        if not isinstance(self.params, dict):
            raise DomainError("params: expected an object")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> InstanceSpec:
        if not isinstance(d, dict):
            raise DomainError("spec: expected an object")
        if "kind" not in d:
            raise DomainError("kind: missing")
        return cls(d["kind"], dict(d.get("params", {})), d.get("seed", 0))

    def with_size(self, N: int) -> InstanceSpec:
        """Copy with the size parameter (``N`` for ideals, ``n`` otherwise) replaced."""
        key = "N" if self.kind == "ideal_truncation" else "n"
        return InstanceSpec(self.kind, {**self.params, key: N}, self.seed)


def generate(spec: InstanceSpec) -> Family:
    """Materialise ``spec`` into a family; identical specs give identical families."""
    p = spec.params
    kind = spec.kind
    if kind == "ideal_truncation":
        ideal = IdealSpec.from_params(p)
        mode = p.get("mode", STRUCTURED)
        budget = p.get("budget", 40)
        return ideal_truncation(ideal, mode, budget, spec.seed)
    n = _int(p, "n")
    ground = GroundSet(n)
    if kind == "atoms":
        sets = [(x,) for x in range(n)]
    elif kind == "ksubsets":
        k = _int(p, "k")
        if k > n:
            raise DomainError(f"params.k: must be <= n={n}, got {k}")
        sets = list(combinations(range(n), k))
    elif kind == "intervals":
        sets = [tuple(range(i, j)) for i in range(n) for j in range(i + 1, n + 1)]
    elif kind == "random":
        m = _int(p, "m", lo=0)
        prob = _rat(p, "p")
        if not 0 < prob <= 1:
            raise DomainError(f"params.p: must lie in (0, 1], got {to_str(prob)}")
        rng = Stream(spec.seed)
        sets = []
        for _ in range(m):
            while True:
                draw = tuple(x for x in range(n) if rng.bernoulli(prob))
                if draw:
                    break
            sets.append(draw)
    else:  # measure_threshold
        m = _int(p, "m", lo=0)
        delta = _rat(p, "delta")
        if not 0 < delta <= 1:
            raise DomainError(f"params.delta: must lie in (0, 1], got {to_str(delta)}")
        lo = ceil(delta * n)
        rng = Stream(spec.seed)
        sets = [tuple(rng.sample(n, lo + rng.below(n - lo + 1))) for _ in range(m)]
    return Family(ground, tuple(Element.from_atoms(ground, s) for s in sets))
