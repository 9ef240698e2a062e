"""
Causality-guided sensor pruning: train, score, drop weak channels, retrain, until
validation loss degrades or the sensor budget is reached.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional

import numpy as np

from .causality import causality_report
from .errors import LtcPruneError, PruneError
from .ltc import ObserverModel, model_fingerprint, restrict_model
from .schemas import CausalityReport, IterationRecord, PruneConfig, PruneTrace, RemovalProbe
from .testbeds import TimeSeriesDataset
from .training import evaluate, multi_seed_train

logger = logging.getLogger(__name__)

StopDecision = Literal["continue", "degradation", "budget", "max_iters"]
IterationCallback = Callable[[IterationRecord, ObserverModel], None]


@dataclass(frozen=True)
class Removal:
    """Channels chosen for removal; ``no_removable`` when the budget forbids any."""
    channels: list[str] = field(default_factory=list)
    no_removable: bool = False


def select_prunable(report: CausalityReport, cfg: PruneConfig) -> Removal:
    """
    Channels scoring below the effective threshold, or the single weakest one when none do.

    The removal set is trimmed from its highest-scoring members so that at least
    ``min_sensors`` channels survive and at most ``max_removals`` go.
    """
    if not report.entries:
        raise PruneError("Cannot prune from an empty causality report")

    scores = report.scores()
    d = len(scores)
    if d <= cfg.min_sensors:
        return Removal(no_removable=True)

    if cfg.threshold_mode == "relative":
        threshold = cfg.threshold_tau * max(scores.values())
    else:
        threshold = cfg.threshold_tau

    # Ascending score, ties by name
    ascending = sorted(scores.items(), key=lambda item: (item[1], item[0]))
    chosen = [name for name, score in ascending if score < threshold]
    if not chosen:
        chosen = [ascending[0][0]]

    limit = d - cfg.min_sensors
    if cfg.max_removals is not None:
        limit = min(limit, cfg.max_removals)
    chosen = chosen[:limit]

    logger.debug(f"Threshold {threshold:.4g}: removing {chosen}")
    return Removal(channels=chosen)


def stop_check(loss_history: list[float], cfg: PruneConfig, n_active: Optional[int] = None) -> StopDecision:
    """
    Decide whether the loop ends after the latest iteration.

    Degradation means the latest loss exceeds (1 + degradation_tol) times the best earlier one.
    """
    if not loss_history:
        raise PruneError("stop_check needs at least one recorded loss")

    if len(loss_history) > 1:
        best_before = min(loss_history[:-1])
        if loss_history[-1] > (1.0 + cfg.degradation_tol) * best_before:
            return "degradation"
    if n_active is not None and n_active <= cfg.min_sensors:
        return "budget"
    if len(loss_history) >= cfg.max_iters:
        return "max_iters"
    return "continue"


def probe_removal(
    dataset: TimeSeriesDataset,
    active: list[str],
    channel: str,
    cfg: PruneConfig,
    reference_loss: float,
    reference_model: Optional[ObserverModel] = None,
) -> RemovalProbe:
    """
    Retrain without ``channel`` and compare the best validation loss to ``reference_loss``.

    When ``cfg.warm_start`` is set and ``reference_model`` is given, that model minus the
    removed input joins the fresh seeds as a candidate.
    """
    if channel not in active:
        raise PruneError(f"{channel} is not an active channel")
    remaining = [name for name in active if name != channel]
    if not remaining:
        raise PruneError(f"Removing {channel} leaves no channels")

    warm = _warm_start(reference_model, remaining, cfg)
    _, reports = multi_seed_train(dataset, remaining, cfg.train, warm_start=warm)
    val_loss = min(r.best_val_loss for r in reports)
    change = (val_loss - reference_loss) / reference_loss if reference_loss > 0 else float("inf")
    degraded = change > cfg.degradation_tol
    logger.info(f"Probe without {channel}: val {val_loss:.5f} ({change:+.1%}){' degraded' if degraded else ''}")
    return RemovalProbe(
        channel=channel,
        remaining=remaining,
        reference_loss=reference_loss,
        val_loss=val_loss,
        relative_change=change,
        degraded=degraded,
    )


def _warm_start(model: Optional[ObserverModel], keep: list[str], cfg: PruneConfig) -> Optional[ObserverModel]:
    if model is None or not cfg.warm_start:
        return None
    if model.hidden_size != cfg.train.hidden_size or not set(keep) <= set(model.channel_names):
        return None
    return restrict_model(model, keep)


def _test_rmse(model: ObserverModel, dataset: TimeSeriesDataset, warmup_steps: int) -> Optional[float]:
    try:
        return evaluate(model, dataset, "test", warmup_steps)["rmse"]
    except LtcPruneError as e:
        logger.warning(f"Test RMSE unavailable: {e.message}")
        return None


def prune_loop(
    dataset: TimeSeriesDataset,
    cfg: PruneConfig,
    on_iteration: Optional[IterationCallback] = None,
    testbed: Optional[str] = None,
) -> tuple[ObserverModel, PruneTrace]:
    """
    Run the pruning iterations and return the best-validation model with the full trace.

    Iteration 0 trains on every dataset channel. Each later iteration removes the channels
    picked by ``select_prunable`` from the previous report and retrains. With
    ``cfg.warm_start`` the retraining also continues the previous model with the removed
    input columns deleted.

    Raises:
        PruneError: training or scoring fails at iteration 0.
    """
    active = list(dataset.channel_names)
    if len(active) < cfg.min_sensors:
        raise PruneError(f"Dataset has {len(active)} channels, fewer than min_sensors={cfg.min_sensors}")

    trace = PruneTrace(
        testbed=testbed or dataset.testbed,
        initial_channels=list(active),
        threshold_mode=cfg.threshold_mode,
        threshold_tau=cfg.threshold_tau,
        degradation_tol=cfg.degradation_tol,
        min_sensors=cfg.min_sensors,
    )
    warmup = cfg.train.warmup_steps
    models: list[ObserverModel] = []
    losses: list[float] = []
    removed: list[str] = []
    stop_reason = "max_iters"

    while True:
        iteration = len(models)
        logger.info(f"Iteration {iteration}: training on {active}")
        try:
            previous = models[-1] if models else None
            model, reports = multi_seed_train(
                dataset, active, cfg.train, warm_start=_warm_start(previous, active, cfg)
            )
            report = causality_report(model, dataset, cfg.spec, warmup)
        except LtcPruneError as e:
            if iteration == 0:
                raise PruneError(f"Iteration 0 failed: {e.message}", trace=trace.model_dump()) from e
            raise

        val_loss = min(r.best_val_loss for r in reports)
        record = IterationRecord(
            iteration=iteration,
            channels=list(active),
            removed=removed,
            val_loss=val_loss,
            test_rmse=_test_rmse(model, dataset, warmup),
            selected_seed=model.seed,
            model_id=model_fingerprint(model),
            train_reports=reports,
            causality=report,
        )
        trace.iterations.append(record)
        models.append(model)
        losses.append(val_loss)
        if on_iteration is not None:
            on_iteration(record, model)

        decision = stop_check(losses, cfg, len(active))
        if decision != "continue":
            stop_reason = decision
            break

        removal = select_prunable(report, cfg)
        if removal.no_removable or not removal.channels:
            stop_reason = "no_removable"
            break

        removed = list(removal.channels)
        active = [name for name in active if name not in removed]
        logger.info(f"Removing {removed}; {len(active)} channels remain")

    # First minimum wins ties
    best = int(np.argmin(losses))
    final = models[best]
    trace.stop_reason = stop_reason
    trace.final_iteration = best
    trace.last_iteration = len(models) - 1
    trace.final_channels = list(final.channel_names)
    trace.final_model_id = model_fingerprint(final)
    initial = len(trace.initial_channels)
    trace.sensor_reduction = 100.0 * (initial - len(final.channel_names)) / initial

    if cfg.probe_minimality and len(trace.final_channels) > 1:
        for channel in trace.final_channels:
            trace.probes.append(
                probe_removal(dataset, trace.final_channels, channel, cfg, losses[best], final)
            )

    logger.info(
        f"Pruning stopped ({stop_reason}) after {len(models)} iterations; "
        f"final set {trace.final_channels} from iteration {best}"
    )
    return final, trace
