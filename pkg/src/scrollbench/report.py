"""Aggregate tables over trial metrics: means, model fits, correlations.

The input is a flat list of per-trial metric rows (one per trial, server-side
metrics). Incomplete trials are excluded from aggregates by default and
counted separately. Fits run over per-distance mean movement times unless
per-trial fitting is requested.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass

from .stats import RegressionFit, compare_fits, pearson

SUMMARY_COLUMNS = (
    "technique",
    "condition",
    "mean_time_s",
    "mean_switchbacks",
    "mean_max_overshoot_px",
    "a",
    "b",
    "r2_linear",
    "r2_log",
)


@dataclass(frozen=True)
class TrialRow:
    """One trial's metrics as consumed by the aggregation layer."""

    session_id: str
    seq: int
    technique: str
    condition: str
    frame_height_factor: float
    target_row_index: int
    distance_group: str
    time_ms: int
    switchbacks: int
    max_overshoot_px: float
    completed: bool
    mismatch: bool = False


@dataclass(frozen=True)
class SummaryRow:
    technique: str
    condition: str
    mean_time_s: float
    mean_switchbacks: float
    mean_max_overshoot_px: float
    a: float | None  # linear-model coefficients
    b: float | None
    r2_linear: float | None
    r2_log: float | None


@dataclass(frozen=True)
class Report:
    summary: tuple[SummaryRow, ...]
    fits: tuple[tuple[str, str, RegressionFit], ...]  # (technique, condition, fit)
    correlations: tuple[tuple[str, str, str, float], ...]  # (condition, metric_x, metric_y, r)
    distance_group_means: tuple[tuple[str, str, str, float, float, float], ...]
    frame_size_effects: tuple[tuple[str, str, float], ...]  # (condition, metric, r)
    trial_count: int
    incomplete_count: int
    mismatch_count: int


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def aggregate_report(rows: list[TrialRow], *, per_trial_fits: bool = False) -> Report:
    """Build every report table from raw trial rows.

    Raises ValueError on empty input. Only completed trials enter the
    aggregates; their count is reported alongside.
    """
    if not rows:
        raise ValueError("no sessions found: nothing to aggregate")
    incomplete = [r for r in rows if not r.completed]
    usable = [r for r in rows if r.completed]
    if not usable:
        raise ValueError("no completed trials to aggregate")

    by_cell: dict[tuple[str, str], list[TrialRow]] = defaultdict(list)
    for r in usable:
        by_cell[(r.technique, r.condition)].append(r)

    # Model fits per technique x condition.
    fit_rows: list[tuple[str, str, RegressionFit]] = []
    fit_lookup: dict[tuple[str, str], dict[str, RegressionFit]] = {}
    for (technique, condition), cell_rows in sorted(by_cell.items()):
        if per_trial_fits:
            points = [(float(r.target_row_index), r.time_ms / 1000.0) for r in cell_rows]
        else:
            by_distance: dict[int, list[float]] = defaultdict(list)
            for r in cell_rows:
                by_distance[r.target_row_index].append(r.time_ms / 1000.0)
            points = [(float(d), _mean(ts)) for d, ts in sorted(by_distance.items())]
        try:
            comparison = compare_fits(points)
        except ValueError:
            continue
        fit_lookup[(technique, condition)] = {
            "linear": comparison.linear,
            "log2": comparison.log2,
        }
        fit_rows.append((technique, condition, comparison.linear))
        fit_rows.append((technique, condition, comparison.log2))

    summary: list[SummaryRow] = []
    for (technique, condition), cell_rows in sorted(by_cell.items()):
        cell_fits = fit_lookup.get((technique, condition))
        linear = cell_fits["linear"] if cell_fits else None
        log2 = cell_fits["log2"] if cell_fits else None
        summary.append(
            SummaryRow(
                technique=technique,
                condition=condition,
                mean_time_s=_mean([r.time_ms / 1000.0 for r in cell_rows]),
                mean_switchbacks=_mean([float(r.switchbacks) for r in cell_rows]),
                mean_max_overshoot_px=_mean([r.max_overshoot_px for r in cell_rows]),
                a=linear.a if linear else None,
                b=linear.b if linear else None,
                r2_linear=linear.r2 if linear else None,
                r2_log=log2.r2 if log2 else None,
            )
        )

    # Cross-metric correlations over per-technique aggregates, per condition.
    correlations: list[tuple[str, str, str, float]] = []
    for condition in sorted({r.condition for r in usable}):
        cond_summary = [s for s in summary if s.condition == condition]
        if len(cond_summary) < 2:
            continue
        metric_values = {
            "mean_time_s": [s.mean_time_s for s in cond_summary],
            "mean_switchbacks": [s.mean_switchbacks for s in cond_summary],
            "mean_max_overshoot_px": [s.mean_max_overshoot_px for s in cond_summary],
        }
        pairs = (
            ("mean_time_s", "mean_switchbacks"),
            ("mean_time_s", "mean_max_overshoot_px"),
            ("mean_switchbacks", "mean_max_overshoot_px"),
        )
        for mx, my in pairs:
            try:
                r = pearson(metric_values[mx], metric_values[my])
            except ValueError:
                continue
            correlations.append((condition, mx, my, r))

    # Distance-group means per technique x condition.
    group_means: list[tuple[str, str, str, float, float, float]] = []
    by_group: dict[tuple[str, str, str], list[TrialRow]] = defaultdict(list)
    for r in usable:
        by_group[(r.technique, r.condition, r.distance_group)].append(r)
    for (technique, condition, group), cell_rows in sorted(by_group.items()):
        group_means.append(
            (
                technique,
                condition,
                group,
                _mean([r.time_ms / 1000.0 for r in cell_rows]),
                _mean([float(r.switchbacks) for r in cell_rows]),
                _mean([r.max_overshoot_px for r in cell_rows]),
            )
        )

    # Frame-size effect: correlation of frame height factor with per-cell
    # (technique x frame height) means, per condition and metric.
    frame_effects: list[tuple[str, str, float]] = []
    for condition in sorted({r.condition for r in usable}):
        cells: dict[tuple[str, float], list[TrialRow]] = defaultdict(list)
        for r in usable:
            if r.condition == condition:
                cells[(r.technique, r.frame_height_factor)].append(r)
        if len({h for (_, h) in cells}) < 2:
            continue
        hs = []
        times = []
        switchbacks = []
        overshoots = []
        for (_, h), cell_rows in sorted(cells.items()):
            hs.append(h)
            times.append(_mean([r.time_ms / 1000.0 for r in cell_rows]))
            switchbacks.append(_mean([float(r.switchbacks) for r in cell_rows]))
            overshoots.append(_mean([r.max_overshoot_px for r in cell_rows]))
        for metric, values in (
            ("mean_time_s", times),
            ("mean_switchbacks", switchbacks),
            ("mean_max_overshoot_px", overshoots),
        ):
            try:
                frame_effects.append((condition, metric, pearson(hs, values)))
            except ValueError:
                continue

    return Report(
        summary=tuple(summary),
        fits=tuple(fit_rows),
        correlations=tuple(correlations),
        distance_group_means=tuple(group_means),
        frame_size_effects=tuple(frame_effects),
        trial_count=len(rows),
        incomplete_count=len(incomplete),
        mismatch_count=sum(1 for r in rows if r.mismatch),
    )


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def summary_to_csv(report: Report) -> str:
    """Technique x condition summary as CSV with the fixed column set."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for row in report.summary:
        writer.writerow([_cell(getattr(row, col)) for col in SUMMARY_COLUMNS])
    return buf.getvalue()


def load_summary_csv(text: str) -> list[SummaryRow]:
    """Parse a summary CSV back into rows (inverse of summary_to_csv)."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != SUMMARY_COLUMNS:
        raise ValueError(f"unexpected summary columns: {header}")
    rows = []
    for record in reader:
        data = dict(zip(SUMMARY_COLUMNS, record))
        rows.append(
            SummaryRow(
                technique=data["technique"],
                condition=data["condition"],
                mean_time_s=float(data["mean_time_s"]),
                mean_switchbacks=float(data["mean_switchbacks"]),
                mean_max_overshoot_px=float(data["mean_max_overshoot_px"]),
                a=float(data["a"]) if data["a"] else None,
                b=float(data["b"]) if data["b"] else None,
                r2_linear=float(data["r2_linear"]) if data["r2_linear"] else None,
                r2_log=float(data["r2_log"]) if data["r2_log"] else None,
            )
        )
    return rows


def summary_rows_to_csv(rows: list[SummaryRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for row in rows:
        writer.writerow([_cell(getattr(row, col)) for col in SUMMARY_COLUMNS])
    return buf.getvalue()


def fits_to_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["technique", "condition", "model", "a", "b", "r2", "n"])
    for technique, condition, fit in report.fits:
        writer.writerow(
            [technique, condition, fit.model, _cell(fit.a), _cell(fit.b), _cell(fit.r2), fit.n]
        )
    return buf.getvalue()


def correlations_to_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["condition", "metric_x", "metric_y", "pearson_r"])
    for condition, mx, my, r in report.correlations:
        writer.writerow([condition, mx, my, _cell(r)])
    return buf.getvalue()


def text_table(headers: list[str], rows: list[list[str]]) -> str:
    """Plain-text table with aligned columns."""
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines) + "\n"


def report_as_text(report: Report) -> str:
    """All report tables as aligned plain text."""
    out = []
    out.append("Per-technique summary\n")
    out.append(
        text_table(
            list(SUMMARY_COLUMNS),
            [
                [
                    s.technique,
                    s.condition,
                    f"{s.mean_time_s:.3f}",
                    f"{s.mean_switchbacks:.3f}",
                    f"{s.mean_max_overshoot_px:.3f}",
                    "" if s.a is None else f"{s.a:.3f}",
                    "" if s.b is None else f"{s.b:.4f}",
                    "" if s.r2_linear is None else f"{s.r2_linear:.4f}",
                    "" if s.r2_log is None else f"{s.r2_log:.4f}",
                ]
                for s in report.summary
            ],
        )
    )
    out.append("\nModel fits\n")
    out.append(
        text_table(
            ["technique", "condition", "model", "a", "b", "r2"],
            [
                [t, c, fit.model, f"{fit.a:.3f}", f"{fit.b:.4f}", f"{fit.r2:.4f}"]
                for t, c, fit in report.fits
            ],
        )
    )
    out.append("\nCross-metric correlations\n")
    out.append(
        text_table(
            ["condition", "metric_x", "metric_y", "pearson_r"],
            [[c, mx, my, f"{r:+.4f}"] for c, mx, my, r in report.correlations],
        )
    )
    out.append("\nDistance-group means\n")
    out.append(
        text_table(
            ["technique", "condition", "group", "time_s", "switchbacks", "overshoot_px"],
            [
                [t, c, g, f"{ts:.3f}", f"{sb:.3f}", f"{ov:.3f}"]
                for t, c, g, ts, sb, ov in report.distance_group_means
            ],
        )
    )
    out.append("\nFrame-size effects\n")
    out.append(
        text_table(
            ["condition", "metric", "pearson_r"],
            [[c, m, f"{r:+.4f}"] for c, m, r in report.frame_size_effects],
        )
    )
    out.append(
        f"\ntrials={report.trial_count} incomplete={report.incomplete_count} "
        f"mismatches={report.mismatch_count}\n"
    )
    return "".join(out)
