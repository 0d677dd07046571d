"""Exact rationals at the I/O boundary.

Values are :class:`fractions.Fraction` internally and always cross file and
CLI boundaries as ``"p/q"`` strings (``"1/1"``, never ``"1"`` or ``"0.5"``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable

from .errors import DomainError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def to_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse(text: str | int | Fraction, *, field: str = "value") -> Fraction:
    """Parse ``"p/q"`` or an integer literal. Decimals are rejected on purpose."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise DomainError(f"{field}: expected a rational 'p/q', got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise DomainError(f"{field}: expected a rational 'p/q', got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise DomainError(f"{field}: expected a rational 'p/q', got {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise DomainError(f"{field}: zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def vector_to_str(values: Iterable[Fraction]) -> list[str]:
    return [to_str(v) for v in values]


def vector_parse(values: Iterable, *, field: str = "vector") -> list[Fraction]:
    return [parse(v, field=f"{field}[{i}]") for i, v in enumerate(values)]
