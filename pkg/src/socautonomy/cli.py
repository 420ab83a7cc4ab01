"""Command-line interface: ``socautonomy run|sweep|replay|compare|catalog``.

Exit codes: 0 success, 1 validation error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .catalog import catalog_to_dict, load_catalog, seed_default_catalog
from .errors import ConfigError, DomainError, IncompleteTraceError, SocAutonomyError
from .metrics import (
    SCALAR_METRICS,
    BaselineComparison,
    RunMetrics,
    compare_baseline,
    compute_metrics,
    emit_report,
    load_metrics,
    sig,
    summarize,
)
from .sim.config import ScenarioConfig, parse_cap, load_scenario, shipped_scenario_path
from .sim.engine import EventTrace, Simulation, run_replications

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors are validation errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _scenario(arg: str) -> ScenarioConfig:
    path = Path(arg)
    if not path.exists() and not path.suffix:
        path = shipped_scenario_path(arg)
    return load_scenario(path)


def _outdir(arg: str) -> Path:
    out = Path(arg)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_metrics(m: RunMetrics | BaselineComparison, out: Path, stem: str) -> None:
    emit_report(m, "json", out / f"{stem}.json")
    emit_report(m, "csv", out / f"{stem}.csv")
    emit_report(m, "table", out / f"{stem}.txt")


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _scenario(args.scenario)
    if args.seed is not None:
        cfg = replace(cfg, seed=_u64(args.seed))
    if args.autonomy_cap is not None:
        cfg = replace(cfg, autonomy_cap=parse_cap(args.autonomy_cap))
    out = _outdir(args.out)
    trace = Simulation(cfg).run()
    metrics = compute_metrics(trace)
    trace.write(out / "trace.jsonl")
    _write_metrics(metrics, out, "metrics")
    print(emit_report(metrics, "table"), end="")
    return EXIT_OK


def parse_param(spec: str) -> tuple[str, list[float]]:
    """``key=lo:hi:step`` to the key and the inclusive grid of values."""
    try:
        key, rng = spec.split("=", 1)
        lo_s, hi_s, step_s = rng.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
    except ValueError:
        raise ConfigError(f"--param must look like key=lo:hi:step, got {spec!r}") from None
    if not key or step <= 0 or hi < lo:
        raise ConfigError(f"invalid sweep range {spec!r}")
    n = int((hi - lo) / step + 1e-9) + 1
    integral = all(s.lstrip("-").isdigit() for s in (lo_s, hi_s, step_s))
    values = [lo + i * step for i in range(n)]
    if integral:
        return key, [int(round(v)) for v in values]
    return key, [round(v, 12) for v in values]


def cmd_sweep(args: argparse.Namespace) -> int:
    base = _scenario(args.scenario)
    key, values = parse_param(args.param)
    if args.replications < 1:
        raise ConfigError("--replications must be at least 1")
    seed = base.seed if args.seed is None else _u64(args.seed)
    out = _outdir(args.out)
    header = ["param", "value", "replications"]
    for name in SCALAR_METRICS:
        header += [f"{name}_mean", f"{name}_stderr"]
    rows, points = [], []
    for value in values:
        cfg = base.with_overrides(**{key: value})
        results = run_replications(cfg, args.replications, seed, n_jobs=args.jobs)
        row = [key, value, args.replications]
        point = {"value": value, "metrics": {}}
        for name in SCALAR_METRICS:
            mean, se = summarize(getattr(m, name) for m in results)
            row += [f"{sig(mean):.6g}", f"{sig(se):.6g}"]
            point["metrics"][name] = {"mean": sig(mean), "stderr": sig(se)}
        rows.append(row)
        points.append(point)
        print(f"{key}={value}: " + ", ".join(f"{n}={point['metrics'][n]['mean']:.6g}" for n in SCALAR_METRICS))
    with open(out / "sweep.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    doc = {"param": key, "replications": args.replications, "base_seed": seed, "points": points}
    (out / "sweep.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        trace = EventTrace.read(args.trace)
    except OSError as exc:
        raise ConfigError(f"cannot read trace: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"trace is not line-delimited JSON: {exc}") from None
    metrics = compute_metrics(trace)
    out = _outdir(args.out)
    _write_metrics(metrics, out, "metrics")
    print(emit_report(metrics, "table"), end="")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        baseline = load_metrics(args.baseline)
        treatment = load_metrics(args.treatment)
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load metrics: {exc}") from None
    comparison = compare_baseline(baseline, treatment)
    for warning in comparison.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    out = _outdir(args.out)
    _write_metrics(comparison, out, "comparison")
    print(emit_report(comparison, "table"), end="")
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.action == "validate":
        if not args.file:
            raise ConfigError("catalog validate needs --file")
        catalog = load_catalog(args.file)
        print(f"{args.file}: ok ({len(catalog)} classes)")
        return EXIT_OK
    catalog = load_catalog(args.file) if args.file else seed_default_catalog()
    if args.json:
        print(json.dumps(catalog_to_dict(catalog), indent=2))
        return EXIT_OK
    cols = ("class_id", "complexity", "risk", "tier", "nist_function", "required_trust", "soc_function", "delegable")
    rows = [[str(p.to_dict()[c]) for c in cols] for p in catalog]
    widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
    print("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
    for r in rows:
        print("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return EXIT_OK


def _u64(value: str | int) -> int:
    try:
        seed = int(value)
    except ValueError:
        raise ConfigError(f"seed must be an integer, got {value!r}") from None
    if not 0 <= seed < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    return seed


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="socautonomy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="simulate one scenario")
    p.add_argument("--scenario", required=True, help="scenario file, or the name of a shipped scenario")
    p.add_argument("--seed", help="master seed (u64); defaults to the scenario's")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--autonomy-cap", help="override the autonomy cap (L0..L4, or none)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="parameter sweep with replications")
    p.add_argument("--scenario", required=True)
    p.add_argument("--param", required=True, help="dotted.key=lo:hi:step")
    p.add_argument("--replications", type=int, default=30)
    p.add_argument("--seed", help="base seed; replication i uses base + i")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("replay", help="recompute metrics from a stored trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("compare", help="baseline vs treatment report")
    p.add_argument("--baseline", required=True)
    p.add_argument("--treatment", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("catalog", help="inspect or validate a task catalog")
    p.add_argument("action", choices=("list", "validate"))
    p.add_argument("--file", help="catalog file; list defaults to the built-in catalog")
    p.add_argument("--json", action="store_true", help="list as JSON")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, IncompleteTraceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SocAutonomyError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
