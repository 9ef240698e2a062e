"""Dataset generation command."""

import argparse
import logging

from rich.table import Table

from ..testbeds import generate_dataset
from ..utils import save_dataset
from .base import console, exit_on_error, start_run

logger = logging.getLogger(__name__)


@exit_on_error
def generate_command(args: argparse.Namespace) -> int:
    """Simulate one testbed and write <testbed>.csv, its metadata and a manifest."""
    run = start_run("generate", args, testbed=args.testbed)
    dataset = generate_dataset(args.testbed, run.run_config)

    csv_path, meta_path = save_dataset(dataset, run.out_dir / f"{args.testbed}.csv")
    run.record("dataset", csv_path)
    run.record("metadata", meta_path)
    run.write_manifest()

    table = Table(title=f"{args.testbed} dataset", border_style="cyan")
    table.add_column("Channel", style="bold magenta")
    table.add_column("Kind")
    table.add_column("mu", justify="right")
    table.add_column("sigma", justify="right")
    for ch in (*dataset.channels, dataset.target):
        table.add_row(ch.name, ch.meta.kind, f"{ch.meta.mu:.4g}", f"{ch.meta.sigma:.4g}")
    console.print(table)
    console.print(f"[bold green]✅ {len(dataset)} samples written to[/bold green] [cyan]{csv_path}[/cyan]")
    return 0
