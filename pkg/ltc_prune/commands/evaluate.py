"""Evaluation command."""

import argparse
import logging

from rich.panel import Panel
from rich.table import Table

from ..ltc import model_fingerprint
from ..schemas import EvaluationMetrics
from ..training import evaluate, predict_segment
from ..utils import load_dataset, load_model, write_json, write_prediction_csv
from .base import console, exit_on_error, start_run
from .report import render_charts

logger = logging.getLogger(__name__)


@exit_on_error
def evaluate_command(args: argparse.Namespace) -> int:
    """Metrics after warm-up plus the full (t, truth, prediction) trace of one segment."""
    model = load_model(args.model)
    dataset = load_dataset(args.dataset)
    run = start_run("evaluate", args, testbed=dataset.testbed)
    segment = args.segment or "test"
    warmup = run.run_config.train.warmup_steps

    scores = evaluate(model, dataset, segment, warmup)
    t, truth, prediction = predict_segment(model, dataset, segment)
    sigma = dataset.target.meta.sigma
    metrics = EvaluationMetrics(
        model_id=model_fingerprint(model),
        segment=segment,
        target=dataset.target.name,
        warmup_steps=warmup,
        n_evaluated=len(truth) - warmup,
        mse=scores["mse"],
        rmse=scores["rmse"],
        mse_raw=scores["mse"] * sigma**2,
        rmse_raw=scores["rmse"] * sigma,
    )

    run.record("metrics", write_json(run.out_dir / f"metrics_{segment}.json", metrics))
    csv_path = run.record("predictions", write_prediction_csv(t, truth, prediction, run.out_dir / f"predictions_{segment}.csv"))
    render_charts(run, [csv_path])
    run.write_manifest()

    table = Table(box=None, show_header=False)
    table.add_row("[bold cyan]Target:[/bold cyan]", dataset.target.name)
    table.add_row("[bold cyan]Samples scored:[/bold cyan]", str(metrics.n_evaluated))
    table.add_row("[bold cyan]RMSE:[/bold cyan]", f"{metrics.rmse:.5f} (raw {metrics.rmse_raw:.5g})")
    table.add_row("[bold cyan]MSE:[/bold cyan]", f"{metrics.mse:.5f} (raw {metrics.mse_raw:.5g})")
    console.print(Panel(table, title=f"[bold green]{segment} segment[/bold green]", border_style="green"))
    return 0
