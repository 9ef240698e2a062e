"""Causality analysis command."""

import argparse
import logging

from rich.table import Table

from ..causality import causality_report
from ..utils import load_dataset, load_model, write_causality_csv, write_json
from .base import console, exit_on_error, start_run
from .report import render_charts

logger = logging.getLogger(__name__)


@exit_on_error
def analyze_command(args: argparse.Namespace) -> int:
    """Score every channel of a trained model by perturbation."""
    model = load_model(args.model)
    dataset = load_dataset(args.dataset)
    run = start_run("analyze", args, testbed=dataset.testbed)

    report = causality_report(model, dataset, run.run_config.causality, run.run_config.train.warmup_steps)
    run.record("causality_json", write_json(run.out_dir / "causality.json", report))
    csv_path = run.record("causality_csv", write_causality_csv(report, run.out_dir / "causality.csv"))
    render_charts(run, [csv_path])
    run.write_manifest()

    table = Table(title=f"Causality ({report.segment}, eps={report.spec.epsilon:g})", border_style="cyan")
    table.add_column("Rank", justify="right")
    table.add_column("Channel", style="bold magenta")
    table.add_column("Score", justify="right")
    for entry in report.entries:
        table.add_row(str(entry.rank), entry.name, f"{entry.score:.5g}")
    console.print(table)
    return 0
