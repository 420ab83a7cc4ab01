"""Run metrics derived from an event trace, baseline comparison and reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Union

from .errors import IncompleteTraceError, ReportWriteError

TERMINAL = ("AutoDismissed", "Dismissed", "Closed")
HISTOGRAM_EDGES_MIN = (0, 10, 30, 120)
HISTOGRAM_LABELS = ("[0,10)", "[10,30)", "[30,120)", "[120,inf)")
SCALAR_METRICS = ("mttr", "fp_rate_at_analyst", "auto_ticket_fraction", "mean_investigation_time")
SIG_DIGITS = 6


def sig(x: float, digits: int = SIG_DIGITS) -> float:
    """Round to ``digits`` significant digits."""
    if x == 0 or not math.isfinite(x):
        return float(x)
    return float(f"{x:.{digits}g}")


def _bin(minutes: float) -> int:
    for i in range(len(HISTOGRAM_EDGES_MIN) - 1, -1, -1):
        if minutes >= HISTOGRAM_EDGES_MIN[i]:
            return i
    return 0


@dataclass
class RunMetrics:
    mttr: float
    fp_rate_at_analyst: float
    auto_ticket_fraction: float
    mean_investigation_time: float
    resolution_histogram: list[int]
    trust_trajectory: dict[str, list[float]]
    totals: dict[str, int]
    undefined: list[str] = field(default_factory=list)
    config_digest: str | None = None
    seed: int | None = None
    autonomy_cap: int | None = None

    def to_dict(self) -> dict:
        return {
            "mttr": sig(self.mttr),
            "fp_rate_at_analyst": sig(self.fp_rate_at_analyst),
            "auto_ticket_fraction": sig(self.auto_ticket_fraction),
            "mean_investigation_time": sig(self.mean_investigation_time),
            "resolution_histogram": dict(zip(HISTOGRAM_LABELS, self.resolution_histogram)),
            "trust_trajectory": {k: [sig(v) for v in vs] for k, vs in sorted(self.trust_trajectory.items())},
            "totals": dict(sorted(self.totals.items())),
            "undefined": sorted(self.undefined),
            "config_digest": self.config_digest,
            "seed": self.seed,
            "autonomy_cap": self.autonomy_cap,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> RunMetrics:
        hist = data["resolution_histogram"]
        if isinstance(hist, Mapping):
            hist = [hist[k] for k in HISTOGRAM_LABELS]
        return cls(
            mttr=float(data["mttr"]),
            fp_rate_at_analyst=float(data["fp_rate_at_analyst"]),
            auto_ticket_fraction=float(data["auto_ticket_fraction"]),
            mean_investigation_time=float(data["mean_investigation_time"]),
            resolution_histogram=[int(v) for v in hist],
            trust_trajectory={k: [float(v) for v in vs] for k, vs in data.get("trust_trajectory", {}).items()},
            totals={k: int(v) for k, v in data.get("totals", {}).items()},
            undefined=list(data.get("undefined", [])),
            config_digest=data.get("config_digest"),
            seed=data.get("seed"),
            autonomy_cap=data.get("autonomy_cap"),
        )

    def rounded(self) -> RunMetrics:
        """The values a structured report carries."""
        return RunMetrics.from_dict(self.to_dict())

    @property
    def modal_bins(self) -> list[str]:
        """Histogram labels ordered from largest to smallest count (stable)."""
        order = sorted(range(len(HISTOGRAM_LABELS)), key=lambda i: -self.resolution_histogram[i])
        return [HISTOGRAM_LABELS[i] for i in order]


def _records(trace: Any) -> tuple[list[dict], dict]:
    if hasattr(trace, "records"):
        return trace.records, getattr(trace, "summary", {}) or {}
    records, summary = [], {}
    for rec in trace:
        if rec.get("transition") == "run_end":
            summary = rec
        else:
            records.append(rec)
    return records, summary


def compute_metrics(trace: Any) -> RunMetrics:
    """Derive every metric from the trace alone.

    Accepts an :class:`~socautonomy.sim.engine.EventTrace` or any iterable of
    event dicts. Raises :class:`IncompleteTraceError` if any ingested alert
    is not in a terminal state at the end of the trace.
    """
    records, summary = _records(trace)
    truth: dict[str, str] = {}
    state: dict[str, str] = {}
    detect: dict[str, float] = {}
    closed: dict[str, float] = {}
    validation_entries = benign_at_analyst = 0
    investigating: dict[str, float] = {}
    investigation_time: dict[str, float] = {}
    ticket_items: dict[str, str] = {}
    tickets_total = tickets_ai = 0
    histogram = [0] * len(HISTOGRAM_LABELS)
    trajectory: dict[str, list[float]] = {}

    for rec in records:
        kind = rec["transition"]
        item = rec["item_id"]
        t = float(rec["time"])
        if "->" in kind:
            src, dst = kind.split("->", 1)
            state[item] = dst
            if dst == "AwaitingHumanValidation":
                validation_entries += 1
                if truth.get(item) == "Benign":
                    benign_at_analyst += 1
            elif dst == "Closed":
                closed.setdefault(item, t)
            if dst == "UnderInvestigation":
                investigating[item] = t
            elif src == "UnderInvestigation" and item in investigating:
                start = investigating.pop(item)
                investigation_time[item] = investigation_time.get(item, 0.0) + t - start
        elif kind == "ingest":
            truth[item] = rec["ground_truth"]
            state[item] = "Ingested"
        elif kind == "detect":
            detect.setdefault(item, t)
        elif kind == "ticket_open":
            tickets_total += 1
            if rec["actor"] == "Ai":
                tickets_ai += 1
            ticket_items[rec["ticket_id"]] = item
        elif kind == "ticket_close":
            minutes = (t - float(rec["opened_at"])) / 60.0
            histogram[_bin(minutes)] += 1
        elif kind == "trust_update":
            trajectory.setdefault(rec["class_id"], []).append(float(rec["trust"]))

    open_items = sorted(i for i, s in state.items() if s not in TERMINAL)
    if open_items:
        raise IncompleteTraceError(f"{len(open_items)} non-terminal items, first {open_items[0]}")

    undefined: list[str] = []
    durations = [closed[i] - detect[i] for i, g in truth.items() if g == "Malicious" and i in detect and i in closed]
    mttr = _mean(durations, "mttr", undefined)
    fp = benign_at_analyst / validation_entries if validation_entries else _undef("fp_rate_at_analyst", undefined)
    auto = tickets_ai / tickets_total if tickets_total else _undef("auto_ticket_fraction", undefined)
    inv = _mean([investigation_time.get(i, 0.0) for i in ticket_items.values()],
                "mean_investigation_time", undefined)

    counts = {s: 0 for s in TERMINAL}
    for s in state.values():
        counts[s] += 1
    totals = {
        "generated": len(truth),
        "malicious": sum(1 for g in truth.values() if g == "Malicious"),
        "auto_dismissed": counts["AutoDismissed"],
        "dismissed": counts["Dismissed"],
        "closed": counts["Closed"],
        "tickets": tickets_total,
        "tickets_ai": tickets_ai,
        "tickets_closed": sum(histogram),
        "at_analyst": validation_entries,
    }
    cap = summary.get("autonomy_cap")
    return RunMetrics(
        mttr=mttr,
        fp_rate_at_analyst=fp,
        auto_ticket_fraction=auto,
        mean_investigation_time=inv,
        resolution_histogram=histogram,
        trust_trajectory=trajectory,
        totals=totals,
        undefined=undefined,
        config_digest=summary.get("config_digest"),
        seed=summary.get("seed"),
        autonomy_cap=None if cap is None else int(cap),
    )


def _undef(name: str, undefined: list[str]) -> float:
    undefined.append(name)
    return 0.0


def _mean(values: list[float], name: str, undefined: list[str]) -> float:
    if not values:
        return _undef(name, undefined)
    return math.fsum(values) / len(values)


# -- baseline comparison -------------------------------------------------------


@dataclass(frozen=True)
class MetricDelta:
    baseline: float
    treatment: float
    absolute: float
    relative: float | None

    def to_dict(self) -> dict:
        return {
            "baseline": sig(self.baseline),
            "treatment": sig(self.treatment),
            "absolute_delta": sig(self.absolute),
            "relative_delta": None if self.relative is None else sig(self.relative),
        }


@dataclass
class BaselineComparison:
    rows: dict[str, MetricDelta]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "metrics": {k: v.to_dict() for k, v in self.rows.items()},
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> BaselineComparison:
        rows = {
            k: MetricDelta(float(v["baseline"]), float(v["treatment"]), float(v["absolute_delta"]),
                           None if v["relative_delta"] is None else float(v["relative_delta"]))
            for k, v in data["metrics"].items()
        }
        return cls(rows, list(data.get("warnings", [])))


def _delta(b: float, t: float) -> MetricDelta:
    return MetricDelta(b, t, t - b, None if b == 0 else (t - b) / b)


def compare_baseline(baseline: RunMetrics, treatment: RunMetrics) -> BaselineComparison:
    """Per-metric deltas, relative to the baseline.

    Metrics whose baseline is zero report only the absolute delta. A config
    mismatch (anything but the autonomy cap and seed) is a warning.
    """
    warnings = []
    if baseline.config_digest != treatment.config_digest:
        warnings.append(
            f"config mismatch: baseline {baseline.config_digest} vs treatment {treatment.config_digest}"
        )
    rows = {name: _delta(getattr(baseline, name), getattr(treatment, name)) for name in SCALAR_METRICS}
    for label, b, t in zip(HISTOGRAM_LABELS, baseline.resolution_histogram, treatment.resolution_histogram):
        rows[f"resolution_histogram{label}"] = _delta(float(b), float(t))
    return BaselineComparison(rows, warnings)


# -- reports -------------------------------------------------------------------

Report = Union[RunMetrics, BaselineComparison]


def _fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.{SIG_DIGITS}g}"
    return str(x)


def _rows(obj: Report) -> tuple[list[str], list[list[Any]]]:
    if isinstance(obj, RunMetrics):
        rows = [[name, getattr(obj, name)] for name in SCALAR_METRICS]
        rows += [[f"resolution_histogram{lab}", n] for lab, n in zip(HISTOGRAM_LABELS, obj.resolution_histogram)]
        rows += [[f"totals.{k}", v] for k, v in sorted(obj.totals.items())]
        return ["metric", "value"], rows
    rows = [[k, d.baseline, d.treatment, d.absolute, d.relative] for k, d in obj.rows.items()]
    return ["metric", "baseline", "treatment", "absolute_delta", "relative_delta"], rows


def render_json(obj: Report) -> str:
    return json.dumps(obj.to_dict(), indent=2, sort_keys=False, allow_nan=False) + "\n"


def render_csv(obj: Report) -> str:
    header, rows = _rows(obj)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


_SECONDS = {"mttr", "mean_investigation_time"}


def render_table(obj: Report) -> str:
    """Human-readable table; durations shown in minutes."""
    header, rows = _rows(obj)
    out = []
    for row in rows:
        name = row[0]
        cells = [name]
        for col, v in zip(header[1:], row[1:]):
            if name in _SECONDS and col != "relative_delta" and v is not None:
                cells.append(f"{v / 60.0:.1f} min")
            else:
                cells.append(_fmt(v))
        out.append(cells)
    widths = [max(len(str(r[i])) for r in [header] + out) for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in out:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "table": render_table}


def emit_report(obj: Report, fmt: str, destination: str | Path | io.TextIOBase | None = None) -> str:
    """Serialize ``obj`` as json, csv or table; write it if a destination is given."""
    try:
        text = RENDERERS[fmt](obj)
    except KeyError:
        raise ValueError(f"unknown report format {fmt!r}") from None
    if destination is None:
        return text
    if hasattr(destination, "write"):
        destination.write(text)
        return text
    try:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {destination}: {exc}") from None
    return text


def load_metrics(path: str | Path) -> RunMetrics:
    return RunMetrics.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def summarize(values: Iterable[float]) -> tuple[float, float]:
    """Sample mean and standard error."""
    xs = list(values)
    n = len(xs)
    mean = math.fsum(xs) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in xs) / (n - 1)
    return mean, math.sqrt(var / n)
