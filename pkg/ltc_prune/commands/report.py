"""Chart rendering and the report command."""

import argparse
import json
import logging
from pathlib import Path
from typing import Iterable

from ..errors import DataError, LtcPruneError
from ..schemas import PruneTrace, RunConfig, RunManifest
from ..state import MANIFEST_NAME, RunState
from ..utils import bar_chart, line_chart, read_causality_csv, read_csv, summary_table
from .base import console, exit_on_error, output_dir

logger = logging.getLogger(__name__)

SUMMARY_NAME = "summary.md"
TRACE_NAME = "trace.json"
REPORT_MANIFEST_NAME = "report_manifest.json"


def _chart_for(csv_path: Path) -> Path:
    svg = csv_path.with_suffix(".svg")
    name = csv_path.name
    if name.startswith("causality"):
        rows = sorted(read_causality_csv(csv_path), key=lambda row: row[2])
        if not rows:
            raise DataError(f"{csv_path} has no rows", code="EMPTY_INPUT")
        return bar_chart([r[0] for r in rows], [r[1] for r in rows], f"Causality scores ({csv_path.parent.name})", svg)

    header, matrix = read_csv(csv_path)
    if not matrix.shape[0]:
        raise DataError(f"{csv_path} has no rows", code="EMPTY_INPUT")
    columns = {h: matrix[:, i] for i, h in enumerate(header)}
    if name.startswith("loss"):
        series = {"train": (columns["epoch"], columns["train_loss"]), "val": (columns["epoch"], columns["val_loss"])}
        return line_chart(series, f"Loss history ({csv_path.stem})", svg, x_label="epoch", y_label="MSE")
    if name.startswith("predictions"):
        series = {"truth": (columns["t"], columns["truth"]), "prediction": (columns["t"], columns["prediction"])}
        return line_chart(series, f"Prediction vs truth ({csv_path.stem})", svg, x_label="t")
    raise DataError(f"No chart type for {csv_path.name}")


def render_charts(run: RunState, csv_paths: Iterable[Path]) -> list[Path]:
    """One SVG next to each CSV; missing or empty inputs are skipped with a warning."""
    written = []
    for csv_path in csv_paths:
        csv_path = Path(csv_path)
        if not csv_path.exists():
            run.warn(f"Chart skipped, missing artifact: {csv_path}")
            continue
        try:
            svg = _chart_for(csv_path)
        except (LtcPruneError, KeyError) as e:
            run.warn(f"Chart skipped for {csv_path.name}: {getattr(e, 'message', e)}")
            continue
        written.append(run.record(f"chart:{run.relative(svg)}", svg))
    logger.info(f"Rendered {len(written)} charts")
    return written


def chart_inputs(out_dir: Path) -> list[Path]:
    """Every CSV in a run directory that has a chart type, in sorted order."""
    found = []
    for pattern in ("loss*.csv", "causality*.csv", "predictions*.csv"):
        found.extend(out_dir.rglob(pattern))
    return sorted(set(found))


def write_summary(run: RunState, traces: list[PruneTrace]) -> Path:
    path = run.out_dir / SUMMARY_NAME
    path.write_text(summary_table(traces), encoding="utf-8")
    return run.record("summary", path)


@exit_on_error
def report_command(args: argparse.Namespace) -> int:
    """Re-render the summary table and charts of an existing run directory."""
    out = output_dir(args)
    manifest_path = out / MANIFEST_NAME
    run = RunState(command="report", out_dir=out)
    expected: list[Path] = []

    if manifest_path.exists():
        manifest = RunManifest.model_validate(json.loads(manifest_path.read_text(encoding="utf-8")))
        run.testbed = manifest.testbed
        run.run_config = RunConfig.model_validate(manifest.config)
        expected = [out / rel for key, rel in manifest.artifacts.items() if rel.endswith(".csv") and not key.startswith("dataset")]

    trace_paths = sorted(out.rglob(TRACE_NAME))
    if not trace_paths and not expected and not chart_inputs(out):
        raise DataError(f"No run artifacts found in {out}", code="MISSING_FILE", details={"path": str(out)})

    traces = [PruneTrace.model_validate_json(p.read_text(encoding="utf-8")) for p in trace_paths]
    if traces:
        write_summary(run, traces)
        console.print(summary_table(traces))

    charts = render_charts(run, sorted(set(expected) | set(chart_inputs(out))))
    # The run's own manifest.json stays as the producing command wrote it
    run.write_manifest(REPORT_MANIFEST_NAME)
    if run.warnings:
        console.print(f"[yellow]⚠️ {len(run.warnings)} warnings[/yellow]")
    console.print(f"[bold green]✅ {len(charts)} charts rendered in[/bold green] [cyan]{out}[/cyan]")
    return 0
