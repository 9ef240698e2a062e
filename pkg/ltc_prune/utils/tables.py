"""Markdown summary of prune traces, one row per iteration plus the final set."""

from typing import Iterable, Optional

from ..schemas import PruneTrace

HEADER = "| Testbed | Iteration | Sensors Removed / Final Set | Val loss | Test RMSE |"
RULE = "|---|---|---|---|---|"

_ROMAN = [(10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I")]


def roman(n: int) -> str:
    """Roman numeral of a positive integer (iteration 0 is shown as I)."""
    out = []
    for value, symbol in _ROMAN:
        while n >= value:
            out.append(symbol)
            n -= value
    return "".join(out)


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4g}"


def trace_rows(trace: PruneTrace) -> list[str]:
    testbed = trace.testbed or "-"
    rows = []
    for record in trace.iterations:
        if record.iteration == 0:
            change = "Initial set: {" + ", ".join(record.channels) + "}"
        else:
            change = "Removed " + ", ".join(record.removed)
        marker = " *" if record.iteration == trace.final_iteration else ""
        rows.append(
            f"| {testbed} | {roman(record.iteration + 1)}{marker} | {change} "
            f"| {_fmt(record.val_loss)} | {_fmt(record.test_rmse)} |"
        )
    if trace.final_channels:
        final = "Final set: {" + ", ".join(trace.final_channels) + "}"
        reduction = f" ({trace.sensor_reduction:.0f}% fewer sensors)" if trace.sensor_reduction is not None else ""
        rows.append(f"| {testbed} | - | {final}{reduction} | | |")
    return rows


def summary_table(traces: Iterable[PruneTrace]) -> str:
    """Markdown table; the best-validation iteration is starred."""
    lines = [HEADER, RULE]
    for trace in traces:
        lines.extend(trace_rows(trace))
    return "\n".join(lines) + "\n"
