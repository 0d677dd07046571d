"""Command-line entry point.

Exit codes: 0 success, 2 malformed input or out-of-domain value, 3 budget
exceeded, 4 certificate verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from . import budget as _budget
from .algebra import Family, dumps_family, family_from_dict, family_to_dict
from .errors import BudgetError, CertificateError, DomainError, KelleyscopeError, StructuralError
from .generators import InstanceSpec, generate
from .intersection import intersection_number_bruteforce, intersection_number_exact
from .kelley import cover_from_measure, synthesize_measure_from_cover
from .measures import Measure
from .mn import EXACT, GREEDY, mn_min_cover
from .rationals import parse, to_str
from .report import (
    Report,
    certificate_to_json,
    cover_from_json,
    cover_to_json,
    measure_from_json,
    mn_to_json,
    synthesis_to_json,
)
from .sweep import Analysis, rows_to_csv, run_sweep


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.phases: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str):
        start = time.perf_counter()
        yield
        if self.enabled:
            self.phases[name] = round((time.perf_counter() - start) * 1000, 3)


def _read_json(path: str, what: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StructuralError(f"{what}: cannot read {path!r} ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"{what}: invalid JSON in {path!r} ({exc})") from None


def _load_family(path: str) -> tuple[Family, dict]:
    d = _read_json(path, "instance")
    return family_from_dict(d), d


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _epsilon(text: str) -> Fraction:
    eps = parse(text, field="--epsilon")
    if not 0 < eps < 1:
        raise DomainError(f"--epsilon: must lie in the open interval (0, 1), got {to_str(eps)}")
    return eps


def cmd_inum(args) -> int:
    timer = _Timer(args.timings)
    f, raw = _load_family(args.instance)
    with timer.phase("exact"):
        cert = intersection_number_exact(f)
    result = certificate_to_json(cert)
    if args.brute is not None or args.oracle_check:
        if len(f) == 0:
            raise DomainError("brute force needs a nonempty family")
        L = args.brute if args.brute is not None else len(cert.witness_sequence)
        with timer.phase("bruteforce"):
            value, seq = intersection_number_bruteforce(f, L, budget=args.budget)
        result["bruteforce"] = {"L": L, "value": to_str(value), "witness_sequence": [[i, k] for i, k in seq.multiplicities.items()]}
        if args.oracle_check:
            covers_witness = L >= len(cert.witness_sequence)
            agrees = value >= cert.value and (value == cert.value or not covers_witness)
            result["oracle_check"] = {"dominates": value >= cert.value, "equal": value == cert.value, "agrees": agrees}
            if not agrees:
                _emit(Report("inum", raw, result, timer.phases).dumps(), args.out)
                raise CertificateError(f"brute-force value {to_str(value)} disagrees with exact value {to_str(cert.value)}")
    _emit(Report("inum", raw, result, timer.phases).dumps(), args.out)
    return 0


def cmd_mn(args) -> int:
    timer = _Timer(args.timings)
    eps = _epsilon(args.epsilon)
    f, raw = _load_family(args.instance)
    with timer.phase("search"):
        rep = mn_min_cover(f, eps, args.mode, strict=not args.non_strict, budget=args.budget)
    _emit(Report("mn", raw, mn_to_json(rep), timer.phases).dumps(), args.out)
    return 0


def cmd_cover(args) -> int:
    timer = _Timer(args.timings)
    f, raw = _load_family(args.instance)
    if args.measure:
        mu = measure_from_json(_read_json(args.measure, "measure"), f)
    else:
        with timer.phase("exact"):
            cert = intersection_number_exact(f)
        mu = cert.witness_measure if cert.witness_measure is not None else Measure.uniform(f.ground)
    grid = [parse(q, field="--grid") for q in args.grid.split(",")]
    cover = cover_from_measure(mu, f, grid)
    payload = cover_to_json(cover)
    if args.cover_out:
        Path(args.cover_out).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    _emit(Report("cover", raw, {"cover": payload}, timer.phases).dumps(), args.out)
    return 0


def cmd_kelley_verify(args) -> int:
    timer = _Timer(args.timings)
    f, raw = _load_family(args.instance)
    d = _read_json(args.cover, "cover")
    if isinstance(d, dict) and "schema_version" in d:
        d = d.get("result", {}).get("cover", d.get("result", {}).get("certificate"))
    cover = cover_from_json(d, f)
    verdicts = [cover.verify_class(j) for j in range(len(cover.classes))]
    failed = [j for j, ok in enumerate(verdicts) if not ok]
    if failed:
        result = {"class_verdicts": verdicts, "failed_classes": failed}
        _emit(Report("kelley-verify", raw, result, timer.phases).dumps(), args.out)
        raise CertificateError(f"class {failed[0]}: witness measure falls below its threshold", class_index=failed[0])
    with timer.phase("synthesis"):
        res = synthesize_measure_from_cover(cover)
    result = synthesis_to_json(res, cover, verdicts)
    _emit(Report("kelley-verify", raw, result, timer.phases).dumps(), args.out)
    return 0


def _spec_from_args(args) -> InstanceSpec:
    if args.spec:
        spec = InstanceSpec.from_dict(_read_json(args.spec, "spec"))
    elif args.kind:
        params = {}
        for item in args.param or []:
            if "=" not in item:
                raise DomainError(f"--param: expected key=value, got {item!r}")
            key, value = item.split("=", 1)
            try:
                params[key] = int(value)
            except ValueError:
                params[key] = value
        spec = InstanceSpec(args.kind, params, 0)
    else:
        raise DomainError("spec: give a spec file or --kind")
    if args.seed is not None:
        spec = InstanceSpec(spec.kind, spec.params, args.seed)
    return spec


def cmd_gen(args) -> int:
    spec = _spec_from_args(args)
    f = generate(spec)
    _emit(dumps_family(f), args.out)
    if args.report:
        rep = Report("gen", spec.to_dict(), {"family": family_to_dict(f), "size": len(f)})
        Path(args.report).write_text(rep.dumps(), encoding="utf-8")
    return 0


def cmd_sweep(args) -> int:
    spec = _spec_from_args(args)
    if args.analysis == "mn":
        if args.epsilon is None:
            raise DomainError("--epsilon: required for --analysis mn")
        analysis = Analysis("mn", _epsilon(args.epsilon), args.mode)
    else:
        analysis = Analysis("inum")
    if args.to < args.from_:
        raise DomainError("--to: must be >= --from")
    sizes = range(args.from_, args.to + 1)
    start = time.perf_counter()
    rows = run_sweep(spec, sizes, analysis, jobs=args.jobs, budget=args.budget, timings=args.timings)
    timings = {"total": round((time.perf_counter() - start) * 1000, 3)} if args.timings else {}
    events = [{"N": r["N"], "status": r["status"], "error": r["error"]} for r in rows if r["status"] == "budget"]
    rep = Report("sweep", spec.to_dict(), {"analysis": _analysis_json(analysis), "series": rows}, timings, events)
    csv_text = rows_to_csv(rows)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(rep.dumps(), encoding="utf-8")
        (out / "sweep.csv").write_text(csv_text, encoding="utf-8")
    else:
        sys.stdout.write(csv_text if args.format == "csv" else rep.dumps())
    if rows and not any(r["status"] == "ok" for r in rows):
        return BudgetError.exit_code if all(r["status"] == "budget" for r in rows) else DomainError.exit_code
    return 0


def _analysis_json(a: Analysis) -> dict:
    d: dict = {"kind": a.kind}
    if a.kind == "mn":
        d.update(epsilon=to_str(a.epsilon), mode=a.mode)
    return d


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the spec's 64-bit seed")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--budget", type=int, default=None, help=f"search/enumeration budget (env {_budget.ENV_VAR})")
    common.add_argument("--out", default=None, help="output path (sweep: directory)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timings", action="store_true", help="record wall-clock timings (reports stop being byte-reproducible)")

    ap = argparse.ArgumentParser(prog="kelleyscope", description="Intersection numbers, Kelley measures and MN covers")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inum", parents=[common], help="exact intersection number with certificates")
    p.add_argument("instance")
    p.add_argument("--brute", type=int, default=None, metavar="L", help="also brute-force over multisets of size <= L")
    p.add_argument("--oracle-check", action="store_true", help="compare with brute force (default L: witness length)")
    p.set_defaults(func=cmd_inum)

    p = sub.add_parser("mn", parents=[common], help="minimal cover by classes with I > 1 - epsilon")
    p.add_argument("instance")
    p.add_argument("--epsilon", required=True, help="rational p/q in (0, 1)")
    p.add_argument("--mode", choices=(EXACT, GREEDY), default=EXACT)
    p.add_argument("--non-strict", action="store_true", help="use I >= 1 - epsilon instead of >")
    p.set_defaults(func=cmd_mn)

    p = sub.add_parser("cover", parents=[common], help="threshold cover C_q = {a : mu(a) >= q}")
    p.add_argument("instance")
    p.add_argument("--measure", default=None, help="measure file (list of p/q); default: the optimal witness")
    p.add_argument("--grid", required=True, help="comma-separated descending thresholds, e.g. 2/3,1/3")
    p.add_argument("--cover-out", default=None, help="also write the bare cover file here")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("kelley-verify", parents=[common], help="verify a cover and synthesise a measure")
    p.add_argument("instance")
    p.add_argument("cover")
    p.set_defaults(func=cmd_kelley_verify)

    for name, func, help_ in (("gen", cmd_gen, "materialise an instance spec"), ("sweep", cmd_sweep, "sweep a spec over N")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("spec", nargs="?", help="instance-spec file")
        p.add_argument("--kind", default=None)
        p.add_argument("--param", action="append", metavar="KEY=VALUE")
        p.set_defaults(func=func)
        if name == "gen":
            p.add_argument("--report", default=None, help="also write a gen report here")
        else:
            p.add_argument("--from", dest="from_", type=int, required=True)
            p.add_argument("--to", type=int, required=True)
            p.add_argument("--analysis", choices=("inum", "mn"), default="inum")
            p.add_argument("--epsilon", default=None)
            p.add_argument("--mode", choices=(EXACT, GREEDY), default=EXACT)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.format == "csv" and args.command != "sweep":
        print("error: --format csv is only available for sweep", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except BudgetError as exc:
        hint = f" (hint: {exc.hint})" if exc.hint else ""
        print(f"budget exceeded: {exc}{hint}", file=sys.stderr)
        return exc.exit_code
    except KelleyscopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
