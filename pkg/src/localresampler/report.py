"""Serialize an :class:`EvalReport` as aligned text and as JSON."""

from __future__ import annotations

import json
from pathlib import Path

from .evaluate import EvalReport

_STAT_KEYS = ("mean", "std_dev", "median", "min", "max")


def report_tree(report: EvalReport, meta: dict | None = None) -> dict:
    tree = {
        "meta": dict(meta or {}),
        "ks": {"per_column": report.ks_by_column(), "average": report.average_ks},
        "descriptives": {
            "original": report.original_stats.as_dict(),
            "synthetic": report.synthetic_stats.as_dict(),
        },
    }
    if report.regression is not None:
        tree["regression"] = {
            "spec": str(report.regression),
            "original": report.original_ols.as_dict(),
            "synthetic": report.synthetic_ols.as_dict(),
        }
    return tree


def render_text(report: EvalReport, meta: dict | None = None) -> str:
    lines = []
    for key, value in (meta or {}).items():
        lines.append(f"{key}: {value}")
    if lines:
        lines.append("")

    width = max(len(n) for n in report.names + ("Variable", "average"))
    lines.append("Kolmogorov-Smirnov distance (original vs synthetic)")
    for name, ks in report.ks_by_column().items():
        lines.append(f"  {name:<{width}}  {ks:8.4f}")
    lines.append(f"  {'average':<{width}}  {report.average_ks:8.4f}")
    lines.append("")

    head = "".join(f"{k:>12}" for k in _STAT_KEYS)
    lines.append("Descriptive statistics")
    lines.append(f"  {'Variable':<{width}}  {'sample':<9}{head}")
    orig = report.original_stats.as_dict()
    synth = report.synthetic_stats.as_dict()
    for name in report.names:
        for label, stats in (("original", orig), ("synthetic", synth)):
            row = "".join(f"{stats[name][k]:12.3f}" for k in _STAT_KEYS)
            shown = name if label == "original" else ""
            lines.append(f"  {shown:<{width}}  {label:<9}{row}")
    if report.regression is not None:
        lines.append("")
        lines.append(f"OLS: {report.regression}")
        o, s = report.original_ols, report.synthetic_ols
        tw = max(len(t) for t in o.names + ("R-squared Adj.",))
        lines.append(f"  {'':<{tw}}  {'Original':>12}  {'Synthetic':>12}")
        for t in o.names:
            lines.append(f"  {t:<{tw}}  {o.coef(t):12.3f}  {s.coef(t):12.3f}")
            i, j = o.names.index(t), s.names.index(t)
            lines.append(f"  {'':<{tw}}  {'(%.3f)' % o.std_errors[i]:>12}  "
                         f"{'(%.3f)' % s.std_errors[j]:>12}")
        lines.append(f"  {'R-squared':<{tw}}  {o.r_squared:12.3f}  {s.r_squared:12.3f}")
        lines.append(f"  {'R-squared Adj.':<{tw}}  {o.adj_r_squared:12.3f}  "
                     f"{s.adj_r_squared:12.3f}")
    return "\n".join(lines) + "\n"


def write_report(report: EvalReport, path, meta: dict | None = None) -> tuple[Path, Path]:
    """Write ``<path>`` (text) and a sibling ``.json`` file; return both paths."""
    path = Path(path)
    json_path = path.with_suffix(".json")
    if json_path == path:
        path = path.with_suffix(".txt")
    path.write_text(render_text(report, meta), newline="\n")
    json_path.write_text(json.dumps(report_tree(report, meta), indent=2) + "\n", newline="\n")
    return path, json_path
