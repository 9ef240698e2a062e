"""Training command."""

import argparse
import logging

from rich.status import Status
from rich.table import Table

from ..training import multi_seed_train
from ..utils import load_dataset, save_model, write_json, write_loss_csv
from .base import console, exit_on_error, parse_channels, start_run
from .report import render_charts

logger = logging.getLogger(__name__)


@exit_on_error
def train_command(args: argparse.Namespace) -> int:
    """Train n_seeds observers on the chosen channels and keep the best on validation."""
    dataset = load_dataset(args.dataset)
    run = start_run("train", args, testbed=dataset.testbed)
    channels = parse_channels(args.channels) or dataset.channel_names
    cfg = run.run_config.train

    with Status(f"[bold blue]Training on {channels}...", console=console, spinner="dots12"):
        model, reports = multi_seed_train(dataset, channels, cfg)

    run.record("model", save_model(model, run.out_dir / "model.json"))
    loss_csvs = []
    for report in reports:
        run.record(f"train_report_seed{report.seed}", write_json(run.out_dir / f"train_report_seed{report.seed}.json", report))
        loss_csvs.append(run.record(f"loss_seed{report.seed}", write_loss_csv(report, run.out_dir / f"loss_seed{report.seed}.csv")))
    render_charts(run, loss_csvs)
    run.write_manifest()

    table = Table(title="Training runs", border_style="cyan")
    table.add_column("Seed", justify="right")
    table.add_column("Epochs", justify="right")
    table.add_column("Best epoch", justify="right")
    table.add_column("Best val loss", justify="right")
    table.add_column("Stop")
    for report in reports:
        style = "bold green" if report.seed == model.seed else ""
        table.add_row(
            str(report.seed), str(report.epochs_run), str(report.best_epoch),
            f"{report.best_val_loss:.5f}", report.stop_reason, style=style,
        )
    console.print(table)
    console.print(f"[bold green]✅ Model (seed {model.seed}) written to[/bold green] [cyan]{run.out_dir / 'model.json'}[/cyan]")
    return 0
