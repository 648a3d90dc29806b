"""CSV emission with embedded provenance and plain-text summary blocks.

Every CSV starts with '# key=value' comment lines holding the full resolved
configuration (master seed included), so any row can be reproduced from the
file alone. Output is UTF-8 with LF line endings and deterministic number
formatting; no timestamps or host details, which keeps reruns byte-identical.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return str(int(value)) if value.is_integer() and abs(value) < 1e15 else repr(value)
    return str(value)


def render_csv(provenance: dict, columns: list[str], rows: Iterable) -> str:
    buf = io.StringIO()
    for key, value in provenance.items():
        buf.write(f"# {key}={format_cell(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path: str, provenance: dict, columns: list[str], rows: Iterable, trailer: str = "") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for key, value in provenance.items():
            fh.write(f"# {key}={format_cell(value)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
        if trailer:
            fh.write(trailer if trailer.endswith("\n") else trailer + "\n")


def condition_report_columns() -> list[str]:
    return ["j", "tail", "bound", "verdict", "count", "ci_low", "ci_high"]


def condition_report_rows(report) -> list[tuple]:
    return [
        (t.j, t.tail, t.bound, t.verdict, t.count, t.ci_low, t.ci_high)
        for t in report.tails
    ]


def condition_summary(report) -> str:
    """Human-readable block for one condition report."""
    lines = [
        f"condition check ({report.mode}, {report.variant})",
        f"  params: eps={report.params.eps} delta={report.params.delta} "
        f"r={report.params.r} j_max={report.params.j_max}",
    ]
    if report.drift_ci is not None:
        lo, hi = report.drift_ci
        lines.append(
            f"  drift: {report.drift:.6g} (95% CI [{lo:.6g}, {hi:.6g}]) "
            f"from {report.n_drift_samples} samples -> {report.drift_verdict}"
        )
    else:
        lines.append(f"  drift: {report.drift:.6g} (exact) -> {report.drift_verdict}")
    counts = {"pass": 0, "fail": 0, "inconclusive": 0}
    for t in report.tails:
        counts[t.verdict] += 1
    lines.append(
        f"  tails: {counts['pass']} pass, {counts['fail']} fail, "
        f"{counts['inconclusive']} inconclusive over {len(report.tails)} indices"
    )
    for t in report.tails:
        if t.verdict == "fail":
            lines.append(f"    FAIL at j={format_cell(t.j)}: tail {t.tail:.6g} > bound {t.bound:.6g}")
    lines.append(f"  overall: {report.overall()}")
    return "\n".join(lines)


def constants_trace(constants) -> str:
    rows = constants.derivation_trace()
    sym_w = max(len(sym) for sym, _, _ in rows)
    formula_w = max(len(formula) for _, formula, _ in rows)
    lines = [
        f"{sym:<{sym_w}}  {formula:<{formula_w}}  {format_cell(float(value))}"
        for sym, formula, value in rows
    ]
    return "\n".join(lines)
