"""Truncation sweeps: one independent analysis per size ``N``, merged in ``N`` order."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import BudgetError, KelleyscopeError
from .generators import InstanceSpec, generate
from .intersection import intersection_number_exact
from .mn import EXACT, mn_min_cover
from .rationals import to_str
from .report import certificate_to_json, mn_to_json

CSV_COLUMNS = ("N", "status", "value_num", "value_den", "value_approx", "k", "mode", "ms")


@dataclass(frozen=True)
class Analysis:
    kind: str = "inum"  # "inum" or "mn"
    epsilon: Fraction | None = None
    mode: str = EXACT

    def label(self) -> str:
        return "inum" if self.kind == "inum" else self.mode


def sweep_point(template: dict, N: int, analysis: Analysis, budget: int | None = None, timings: bool = False) -> dict:
    """Analyse the instance of size ``N``; failures become a flagged row, never an exception."""
    row: dict = {"N": N, "status": "ok", "mode": analysis.label(), "value": None, "k": None, "error": None}
    start = time.perf_counter()
    try:
        spec = InstanceSpec.from_dict(template).with_size(N)
        f = generate(spec)
        if analysis.kind == "inum":
            cert = intersection_number_exact(f)
            row["value"] = to_str(cert.value)
            row["certificate"] = certificate_to_json(cert)
        else:
            rep = mn_min_cover(f, analysis.epsilon, analysis.mode, budget=budget)
            row["k"] = rep.k
            row["certificate"] = mn_to_json(rep)
    except BudgetError as exc:
        row.update(status="budget", error=str(exc))
    except KelleyscopeError as exc:
        row.update(status="error", error=str(exc))
    row["ms"] = round((time.perf_counter() - start) * 1000, 3) if timings else None
    return row


def run_sweep(
    template: InstanceSpec | dict,
    sizes: Iterable[int],
    analysis: Analysis = Analysis(),
    *,
    jobs: int = 1,
    budget: int | None = None,
    timings: bool = False,
) -> list[dict]:
    """Rows in ascending ``N``; the output does not depend on ``jobs``."""
    tmpl = template.to_dict() if isinstance(template, InstanceSpec) else dict(template)
    sizes = sorted(set(sizes))
    if jobs <= 1 or len(sizes) <= 1:
        return [sweep_point(tmpl, N, analysis, budget, timings) for N in sizes]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(sweep_point, tmpl, N, analysis, budget, timings) for N in sizes]
        return [fut.result() for fut in futures]


def rows_to_csv(rows: list[dict]) -> str:
    """CSV with exact numerator/denominator columns; ``value_approx`` is a float for plotting only."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        if r["value"] is not None:
            q = Fraction(r["value"])
            num, den, approx = q.numerator, q.denominator, f"{float(q):.6f}"
        else:
            num = den = approx = ""
        k = "" if r["k"] is None else r["k"]
        ms = "" if r.get("ms") is None else r["ms"]
        w.writerow((r["N"], r["status"], num, den, approx, k, r["mode"], ms))
    return buf.getvalue()
