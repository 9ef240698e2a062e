"""
Perturbation causality: shift one input channel by a constant offset, rerun the observer
from the same zero state, and average the absolute output deviation over a window.
"""

import logging
from typing import Iterable, Optional

import numpy as np

from .errors import ChannelError, EvaluationError
from .ltc import ObserverModel, forward, model_fingerprint
from .schemas import CausalityEntry, CausalityReport, PerturbationSpec
from .testbeds import TimeSeriesDataset

logger = logging.getLogger(__name__)


def perturb_channel(inputs: np.ndarray, j: int, epsilon: float) -> np.ndarray:
    """Copy of ``inputs`` with ``epsilon`` added to every row of column j."""
    inputs = np.asarray(inputs, dtype=float)
    d = inputs.shape[1]
    if not 0 <= j < d:
        raise ChannelError(f"Channel index {j} out of range for {d} channels")
    perturbed = inputs.copy()
    perturbed[:, j] += epsilon
    return perturbed


def trajectory_delta(
    model: ObserverModel,
    inputs: np.ndarray,
    j: int,
    epsilon: float,
    baseline: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Perturbed minus baseline estimates, both from a zero hidden state."""
    if baseline is None:
        _, baseline = forward(model, inputs)
    _, perturbed = forward(model, perturb_channel(inputs, j, epsilon))
    return perturbed - baseline


def _window(spec: PerturbationSpec, length: int, warmup_steps: int) -> tuple[int, int]:
    start = warmup_steps if spec.window_start is None else spec.window_start
    size = length - start if spec.window_len is None else spec.window_len
    if size < 1 or start + size > length:
        raise EvaluationError(
            f"Causality window [{start}, {start + size}) does not fit a segment of {length} samples"
        )
    return start, size


def _window_score(delta: np.ndarray, start: int, size: int) -> float:
    return float(np.mean(np.abs(delta[start:start + size])))


def causality_score(
    model: ObserverModel,
    inputs: np.ndarray,
    j: int,
    spec: PerturbationSpec,
    warmup_steps: int = 50,
) -> float:
    """Mean absolute output deviation over the evaluated window."""
    start, size = _window(spec, len(inputs), warmup_steps)
    return _window_score(trajectory_delta(model, inputs, j, spec.epsilon), start, size)


def causality_report(
    model: ObserverModel,
    dataset: TimeSeriesDataset,
    spec: PerturbationSpec,
    warmup_steps: int = 50,
) -> CausalityReport:
    """
    Score every model channel on ``spec.segment``.

    One baseline forward pass plus one per channel. Entries are ordered by descending
    score; equal scores rank alphabetically.
    """
    if not spec.in_recommended_range:
        logger.warning(f"epsilon={spec.epsilon:g} lies outside the recommended range [1e-3, 1e-2]")

    inputs, _ = dataset.segment(spec.segment, model.channel_names)
    start, size = _window(spec, len(inputs), warmup_steps)

    _, baseline = forward(model, inputs)
    scores = {
        name: _window_score(trajectory_delta(model, inputs, j, spec.epsilon, baseline), start, size)
        for j, name in enumerate(model.channel_names)
    }

    ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    entries = [CausalityEntry(name=name, score=score, rank=i + 1) for i, (name, score) in enumerate(ordered)]

    report = CausalityReport(
        model_id=model_fingerprint(model),
        segment=spec.segment,
        spec=spec,
        window_start=start,
        window_len=size,
        forward_passes=len(scores) + 1,
        entries=entries,
    )
    logger.info("Causality ranking: " + ", ".join(f"{e.name}={e.score:.4g}" for e in entries))
    return report


def epsilon_sweep(
    model: ObserverModel,
    dataset: TimeSeriesDataset,
    spec: PerturbationSpec,
    epsilons: Iterable[float],
    warmup_steps: int = 50,
) -> tuple[list[CausalityReport], bool]:
    """Reports for several epsilon values and whether all of them agree on the ranking."""
    reports = [
        causality_report(model, dataset, spec.model_copy(update={"epsilon": eps}), warmup_steps)
        for eps in epsilons
    ]
    if not reports:
        raise EvaluationError("epsilon_sweep needs at least one epsilon")
    first = reports[0].ranking()
    stable = all(r.ranking() == first for r in reports[1:])
    if not stable:
        logger.warning(f"Ranking changes across epsilon values {[r.spec.epsilon for r in reports]}")
    return reports, stable
