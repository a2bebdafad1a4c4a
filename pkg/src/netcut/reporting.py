"""Serialization of exploration results: JSON, CSV, text summary, SVG.

Report JSON is byte-reproducible for identical inputs; the only volatile
value (the generation timestamp) is confined to the ``metadata`` object so
consumers can compare reports with that key stripped.
"""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from .explorer import ChosenTrn, Deadline, ExplorationReport, GapAnalysis, ParetoPoint
from .netmodel import trn_to_json

PARETO_CSV_HEADER = ["network", "cutpoint", "latency_ms", "accuracy", "on_frontier"]


def _chosen_to_json(c: ChosenTrn) -> dict:
    return {
        "network": c.network,
        "feasible": c.feasible,
        "trn": trn_to_json(c.trn) if c.trn else None,
        "estimated_latency_ms": c.estimated_latency,
        "latency_method": c.latency_method,
        "accuracy": c.accuracy,
    }


def report_to_json(report: ExplorationReport, timestamp: str | None = None) -> dict:
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat()
    return {
        "deadline_ms": report.deadline_ms,
        "granularity": report.granularity,
        "estimator": report.estimator,
        "feasible": report.feasible,
        "chosen": [_chosen_to_json(c) for c in report.chosen],
        "winner": _chosen_to_json(report.winner) if report.winner else None,
        "offshelf_best": (
            _chosen_to_json(report.offshelf_best) if report.offshelf_best else None
        ),
        "candidates_trained": report.candidates_trained,
        "baseline_candidates": report.baseline_candidates,
        "cost": (
            {
                "baseline_candidates": report.cost.baseline_candidates,
                "netcut_candidates": report.cost.netcut_candidates,
                "baseline_hours": report.cost.baseline_hours,
                "netcut_hours": report.cost.netcut_hours,
                "candidate_reduction_pct": report.cost.candidate_reduction_pct,
                "speedup": report.cost.speedup,
            }
            if report.cost
            else None
        ),
        "slack_ms": report.slack_ms,
        "gap_closed_pct": report.gap_closed_pct,
        "metadata": {"generated_at": timestamp},
    }


def write_report_json(report: ExplorationReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report_to_json(report), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def report_summary(report: ExplorationReport) -> str:
    lines = [
        f"deadline: {report.deadline_ms} ms "
        f"({report.granularity}, {report.estimator} estimator)",
    ]
    for c in report.chosen:
        if c.feasible:
            lines.append(
                f"  {c.network}: cutpoint {c.trn.cutpoint}, "
                f"est {c.estimated_latency:.4f} ms, accuracy {c.accuracy:.4f}"
            )
        else:
            lines.append(f"  {c.network}: infeasible (no cutpoint meets the deadline)")
    if report.winner:
        w = report.winner
        lines.append(
            f"winner: {w.trn.label} (accuracy {w.accuracy:.4f}, "
            f"est {w.estimated_latency:.4f} ms, slack {report.slack_ms:.4f} ms)"
        )
    else:
        lines.append("winner: none (infeasible for every network)")
    lines.append(
        f"candidates trained: {report.candidates_trained} vs "
        f"{report.baseline_candidates} blockwise candidates"
    )
    if report.cost:
        lines.append(
            f"cost: {report.cost.candidate_reduction_pct:.1f}% candidate reduction, "
            f"{report.cost.speedup:.1f}x speedup "
            f"({report.cost.baseline_hours:.1f} h vs {report.cost.netcut_hours:.1f} h)"
        )
    if report.gap_closed_pct is not None and report.offshelf_best is not None:
        lines.append(
            f"vs best off-the-shelf ({report.offshelf_best.network}, accuracy "
            f"{report.offshelf_best.accuracy:.4f}): {report.gap_closed_pct:+.2f}% "
            f"relative accuracy"
        )
    return "\n".join(lines) + "\n"


def write_pareto_csv(
    points: Sequence[ParetoPoint],
    frontier: Sequence[ParetoPoint],
    path: str | Path,
) -> None:
    on_frontier = {(p.trn.source, p.trn.cutpoint) for p in frontier}
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(PARETO_CSV_HEADER)
        for p in sorted(points, key=lambda p: (p.latency, p.trn.source, p.trn.cutpoint)):
            writer.writerow(
                [
                    p.trn.source,
                    p.trn.cutpoint,
                    f"{p.latency:.6f}",
                    f"{p.accuracy:.6f}",
                    int((p.trn.source, p.trn.cutpoint) in on_frontier),
                ]
            )


def pareto_svg(
    points: Sequence[ParetoPoint],
    frontier: Sequence[ParetoPoint],
    deadline: Deadline | None = None,
    width: int = 640,
    height: int = 420,
) -> str:
    """Static latency/accuracy scatter with the deadline as a vertical line."""
    margin = 50.0
    lats = [p.latency for p in points] + ([deadline.value] if deadline else [])
    accs = [p.accuracy for p in points]
    lo_x, hi_x = min(lats), max(lats)
    lo_y, hi_y = min(accs), max(accs)
    span_x = (hi_x - lo_x) or 1.0
    span_y = (hi_y - lo_y) or 1.0

    def sx(v: float) -> float:
        return margin + (v - lo_x) / span_x * (width - 2 * margin)

    def sy(v: float) -> float:
        return height - margin - (v - lo_y) / span_y * (height - 2 * margin)

    on_frontier = {(p.trn.source, p.trn.cutpoint) for p in frontier}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2}" y="{height - 10}" text-anchor="middle" '
        f'font-size="12">latency (ms)</text>',
        f'<text x="14" y="{height / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {height / 2})">accuracy</text>',
    ]
    if deadline is not None:
        x = sx(deadline.value)
        parts.append(
            f'<line x1="{x:.1f}" y1="{margin}" x2="{x:.1f}" '
            f'y2="{height - margin}" stroke="red" stroke-dasharray="4 3"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{margin - 6}" text-anchor="middle" '
            f'font-size="11" fill="red">deadline {deadline.value} ms</text>'
        )
    for p in sorted(points, key=lambda p: (p.trn.source, p.trn.cutpoint)):
        color = "steelblue" if (p.trn.source, p.trn.cutpoint) in on_frontier else "gray"
        parts.append(
            f'<circle cx="{sx(p.latency):.1f}" cy="{sy(p.accuracy):.1f}" r="3.5" '
            f'fill="{color}"><title>{p.trn.label}: {p.latency:.4f} ms, '
            f"{p.accuracy:.4f}</title></circle>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def gap_to_json(gap: GapAnalysis) -> dict:
    return {
        "feasible": gap.feasible,
        "best": (
            {
                "network": gap.best.trn.source,
                "cutpoint": gap.best.trn.cutpoint,
                "latency_ms": gap.best.latency,
                "accuracy": gap.best.accuracy,
            }
            if gap.best
            else None
        ),
        "slack_ms": gap.slack_ms,
        "accuracy_gap": gap.accuracy_gap,
    }
