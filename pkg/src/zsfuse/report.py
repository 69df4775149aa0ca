"""Summary-table rendering for grid results and stored reference fixtures.

Reference fixtures carry published values that this engine does not
recompute; the formatter renders them side by side with fresh runs.
"""

from __future__ import annotations

import json
from importlib import resources

from .grid import GridSummary

SUMMARY_COLUMNS = ("System", "Dataset", "Best a×t", "Default 1×1", "Worst a×t",
                   "Range Δ", "No-ALM Baseline")


def load_fixture(name: str) -> dict:
    """Load a bundled reference table ("table1" or "table2")."""
    path = resources.files("zsfuse.fixtures").joinpath(f"{name}.json")
    return json.loads(path.read_text(encoding="utf-8"))


def _fmt(mean: float, std: float) -> str:
    return f"{mean:.4f}±{std:.4f}"


def summary_row(system: str, dataset: str, summary: GridSummary) -> dict:
    """Convert a fresh GridSummary into a renderable row."""
    row = {
        "system": system,
        "dataset": dataset,
        "best_cell": f"a{summary.best_cell[0]}×t{summary.best_cell[1]}",
        "best_mean": summary.best.mean, "best_std": summary.best.std,
        "default_mean": summary.default.mean, "default_std": summary.default.std,
        "worst_cell": f"a{summary.worst_cell[0]}×t{summary.worst_cell[1]}",
        "worst_mean": summary.worst.mean, "worst_std": summary.worst.std,
        "range_delta": summary.range_delta,
    }
    if summary.no_alm_baseline is not None:
        row["baseline_mean"] = summary.no_alm_baseline.mean
        row["baseline_std"] = summary.no_alm_baseline.std
    return row


def render_summary_table(rows: list[dict], title: str = "") -> str:
    """Aligned-text table with Best/Default/Worst/Δ/Baseline columns."""
    body = []
    for r in rows:
        if "baseline_mean" in r:
            baseline = "a0×t0: " + _fmt(r["baseline_mean"], r["baseline_std"])
        else:
            baseline = "—"
        body.append((
            r["system"],
            r["dataset"],
            f"{r['best_cell']}: " + _fmt(r["best_mean"], r["best_std"]),
            "a1×t1: " + _fmt(r["default_mean"], r["default_std"]),
            f"{r['worst_cell']}: " + _fmt(r["worst_mean"], r["worst_std"]),
            f"{r['range_delta']:.4f}",
            baseline,
        ))
    widths = [max(len(SUMMARY_COLUMNS[i]), *(len(row[i]) for row in body))
              if body else len(SUMMARY_COLUMNS[i])
              for i in range(len(SUMMARY_COLUMNS))]
    lines = []
    if title:
        lines.append(title)
    lines.append("  ".join(c.ljust(w) for c, w in zip(SUMMARY_COLUMNS, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def render_table2_fixture() -> str:
    """Render the bundled amplification-summary reference table."""
    fixture = load_fixture("table2")
    return render_summary_table(fixture["rows"],
                                title=f"[reference] {fixture['caption']}")


def render_table1_fixture() -> str:
    """Render the bundled per-pairing UAR reference table."""
    fixture = load_fixture("table1")
    datasets = ("RAVDESS", "MSP-Podcast", "IEMOCAP")
    header = ("Setting (FM + ALM)",) + tuple(f"{d} UAR" for d in datasets)
    body = [("Random",) + tuple(_fmt(*fixture["random"][d]) for d in datasets)]
    for r in fixture["rows"]:
        body.append((f"{r['fm']} + {r['alm']}",)
                    + tuple(_fmt(*r[d]) for d in datasets))
    widths = [max(len(header[i]), *(len(row[i]) for row in body))
              for i in range(len(header))]
    lines = [f"[reference] {fixture['caption']}",
             "  ".join(c.ljust(w) for c, w in zip(header, widths)),
             "  ".join("-" * w for w in widths)]
    for row in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(line.rstrip() for line in lines) + "\n"
