"""Pruning command: the full train / score / prune loop with its artifacts."""

import argparse
import logging

from ..errors import PruneError
from ..ltc import ObserverModel
from ..pruner import prune_loop
from ..schemas import IterationRecord
from ..utils import load_dataset, save_model, summary_table, write_causality_csv, write_json, write_loss_csv
from .base import console, exit_on_error, start_run
from .report import TRACE_NAME, chart_inputs, render_charts, write_summary

logger = logging.getLogger(__name__)


@exit_on_error
def prune_command(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    run = start_run("prune", args, testbed=dataset.testbed)
    cfg = run.run_config.prune_config()

    def save_iteration(record: IterationRecord, model: ObserverModel) -> None:
        folder = run.out_dir / f"iter_{record.iteration}"
        key = f"iter_{record.iteration}"
        run.record(f"{key}/model", save_model(model, folder / "model.json"))
        if record.causality is not None:
            run.record(f"{key}/causality_json", write_json(folder / "causality.json", record.causality))
            run.record(f"{key}/causality_csv", write_causality_csv(record.causality, folder / "causality.csv"))
        for report in record.train_reports:
            run.record(f"{key}/loss_seed{report.seed}", write_loss_csv(report, folder / f"loss_seed{report.seed}.csv"))
        console.print(
            f"[bold blue]Iteration {record.iteration}[/bold blue]: {len(record.channels)} channels, "
            f"val loss {record.val_loss:.5f}"
        )

    try:
        model, trace = prune_loop(dataset, cfg, on_iteration=save_iteration, testbed=dataset.testbed)
    except PruneError as e:
        if "trace" in e.details:
            run.record("trace_partial", write_json(run.out_dir / "trace_partial.json", e.details["trace"]))
            run.write_manifest()
        raise

    run.record("trace", write_json(run.out_dir / TRACE_NAME, trace))
    run.record("final_model", save_model(model, run.out_dir / "final_model.json"))
    write_summary(run, [trace])
    render_charts(run, chart_inputs(run.out_dir))
    run.write_manifest()

    console.print(summary_table([trace]))
    console.print(
        f"[bold green]✅ Stopped on {trace.stop_reason}; final set {trace.final_channels}[/bold green] "
        f"[cyan]{run.out_dir}[/cyan]"
    )
    return 0
