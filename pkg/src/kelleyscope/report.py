"""Canonical JSON report schema and the (de)serialisers for certificates.

Reports are written with sorted keys, two-space indentation and a trailing
newline, and every rational is a ``"p/q"`` string, so ``dumps(loads(text))``
reproduces ``text`` byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Family
from .errors import DomainError, StructuralError
from .intersection import IntersectionCertificate, WeightedSequence
from .kelley import CoverCertificate, SynthesisResult
from .measures import Measure
from .mn import MNReport
from .rationals import parse, to_str, vector_parse, vector_to_str

SCHEMA_VERSION = "1"


@dataclass
class Report:
    command: str
    instance: dict | None
    result: dict
    timings: dict = field(default_factory=dict)
    budget_events: list = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "instance": self.instance,
            "result": self.result,
            "timings": self.timings,
            "budget_events": self.budget_events,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> Report:
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StructuralError(f"report: invalid JSON ({exc})") from None
        if not isinstance(d, dict):
            raise StructuralError("report: expected a JSON object")
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise DomainError(f"schema_version: unsupported report version {version!r} (expected {SCHEMA_VERSION!r})")
        missing = [k for k in ("command", "instance", "result", "timings", "budget_events") if k not in d]
        if missing:
            raise StructuralError(f"report: missing fields {missing}")
        return cls(d["command"], d["instance"], d["result"], d["timings"], d["budget_events"], version)


def measure_to_json(mu: Measure | None) -> list[str] | None:
    return None if mu is None else vector_to_str(mu.weights)


def measure_from_json(values, f: Family, *, field: str = "measure") -> Measure:
    if not isinstance(values, list):
        raise StructuralError(f"{field}: expected a list of 'p/q' weights")
    weights = vector_parse(values, field=field)
    if len(weights) != f.ground.size:
        raise StructuralError(f"{field}: expected {f.ground.size} weights, got {len(weights)}")
    try:
        return Measure(f.ground, tuple(weights))
    except DomainError as exc:
        raise DomainError(f"{field}: {exc}") from None


def sequence_to_json(seq: WeightedSequence | None) -> list[list[int]] | None:
    return None if seq is None else [[i, k] for i, k in seq.multiplicities.items()]


def certificate_to_json(cert: IntersectionCertificate) -> dict:
    seq = cert.witness_sequence
    return {
        "value": to_str(cert.value),
        "witness_measure": measure_to_json(cert.witness_measure),
        "witness_sequence": sequence_to_json(seq),
        "sequence_length": len(seq) if seq is not None else 0,
        "lp_verified": cert.lp_verified,
    }


def cover_to_json(cover: CoverCertificate) -> dict:
    return {
        "classes": [list(c) for c in cover.classes],
        "thresholds": vector_to_str(cover.thresholds),
        "witnesses": [measure_to_json(mu) for mu in cover.witnesses],
        "covers_all": cover.covers_all,
    }


def cover_from_json(d: dict, f: Family) -> CoverCertificate:
    """Parse a cover file against ``f``; errors name the offending field."""
    if not isinstance(d, dict):
        raise StructuralError("cover: expected a JSON object")
    for key in ("classes", "thresholds", "witnesses"):
        if key not in d:
            raise StructuralError(f"{key}: missing field")
        if not isinstance(d[key], list):
            raise StructuralError(f"{key}: expected a list")
    classes = []
    for j, cls in enumerate(d["classes"]):
        if not isinstance(cls, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in cls):
            raise StructuralError(f"classes[{j}]: expected a list of element indices")
        classes.append(tuple(cls))
    thresholds = vector_parse(d["thresholds"], field="thresholds")
    witnesses = [measure_from_json(w, f, field=f"witnesses[{j}]") for j, w in enumerate(d["witnesses"])]
    covers_all = d.get("covers_all")
    if covers_all is not None and not isinstance(covers_all, bool):
        raise StructuralError("covers_all: expected a boolean")
    return CoverCertificate(f, tuple(classes), tuple(thresholds), tuple(witnesses), covers_all)


def mn_to_json(report: MNReport) -> dict:
    return {
        "epsilon": to_str(report.epsilon),
        "k": report.k,
        "mode": report.mode,
        "optimal": report.optimal,
        "strict": report.strict,
        "certificate": cover_to_json(report.certificate),
        "stats": dict(report.stats),
    }


def synthesis_to_json(res: SynthesisResult, cover: CoverCertificate, class_verdicts: list[bool]) -> dict:
    return {
        "measure": measure_to_json(res.measure),
        "normalization": to_str(res.normalization),
        "class_bounds": vector_to_str(res.class_bounds),
        "class_verdicts": class_verdicts,
        "strictly_positive": res.strictly_positive,
        "covers_all": cover.covers_all,
    }


def rational_field(d: dict, key: str) -> Fraction:
    return parse(d[key], field=key)
