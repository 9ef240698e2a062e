"""Standardized, split datasets assembled from raw testbed trajectories."""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from ..errors import ChannelError, DataError
from ..schemas import ChannelMeta, DatasetConfig, RunConfig, SegmentName, Split
from .base import LAYOUTS, RawTrajectories
from .cstr import simulate_cstr
from .mechanical import simulate_mechanical
from .noise import smoothed_noise
from .predprey import simulate_predprey

logger = logging.getLogger(__name__)

SIMULATORS = {
    "mechanical": simulate_mechanical,
    "cstr": simulate_cstr,
    "predprey": simulate_predprey,
}


@dataclass(frozen=True, eq=False)
class Channel:
    """A standardized value sequence with its metadata."""
    meta: ChannelMeta
    values: np.ndarray

    @property
    def name(self) -> str:
        return self.meta.name


@dataclass(frozen=True, eq=False)
class TimeSeriesDataset:
    """Standardized input channels plus one target on a uniform time grid."""
    t: np.ndarray
    channels: tuple[Channel, ...]
    target: Channel
    split: Optional[Split] = None
    testbed: Optional[str] = None

    def __post_init__(self):
        n = len(self.t)
        names = self.channel_names
        if len(set(names)) != len(names):
            raise DataError(f"Duplicate channel names: {names}", code="SHAPE_ERROR")
        for ch in (*self.channels, self.target):
            if len(ch.values) != n:
                raise DataError(
                    f"Channel {ch.name} has {len(ch.values)} samples, grid has {n}",
                    code="SHAPE_ERROR",
                )
        if self.split is not None and not self.split.val_end < n:
            raise DataError(f"Split {self.split} exceeds {n} samples", code="SHAPE_ERROR")

    def __len__(self) -> int:
        return len(self.t)

    @property
    def channel_names(self) -> list[str]:
        return [c.name for c in self.channels]

    def channel(self, name: str) -> Channel:
        for ch in self.channels:
            if ch.name == name:
                return ch
        raise ChannelError(f"Dataset has no channel {name}", [name])

    def inputs(self, names: Optional[Sequence[str]] = None) -> np.ndarray:
        """Input matrix (N, d) with columns in the given order (default: all channels)."""
        names = self.channel_names if names is None else list(names)
        if not names:
            return np.empty((len(self.t), 0))
        return np.column_stack([self.channel(n).values for n in names])

    def bounds(self, segment: SegmentName) -> tuple[int, int]:
        if self.split is None:
            raise DataError("Dataset has no split; run chrono_split first", code="NO_SPLIT")
        return {
            "train": (0, self.split.train_end),
            "val": (self.split.train_end, self.split.val_end),
            "test": (self.split.val_end, len(self.t)),
        }[segment]

    def segment(
        self, segment: SegmentName, names: Optional[Sequence[str]] = None
    ) -> tuple[np.ndarray, np.ndarray]:
        """(inputs, target) restricted to one chronological segment."""
        start, stop = self.bounds(segment)
        return self.inputs(names)[start:stop], self.target.values[start:stop]


# ============ Operations ============

def standardize(signal: Sequence[float]) -> tuple[np.ndarray, float, float]:
    """
    Subtract the sample mean and divide by the sample standard deviation (n-1).

    Returns:
        (standardized values, mu, sigma)

    Raises:
        DataError: fewer than two samples, or a constant signal.
    """
    x = np.asarray(signal, dtype=float)
    if x.size < 2:
        raise DataError("standardize needs at least two samples", code="EMPTY_INPUT")
    mu = float(x.mean())
    sigma = float(x.std(ddof=1))
    if not sigma > 0:
        raise DataError("Constant signal cannot be standardized", code="DEGENERATE_CHANNEL")
    return (x - mu) / sigma, mu, sigma


def _channel(name: str, values: np.ndarray, kind: str) -> Channel:
    try:
        z, mu, sigma = standardize(values)
    except DataError as e:
        raise DataError(f"Channel {name}: {e.message}", code=e.code) from e
    return Channel(ChannelMeta(name=name, mu=mu, sigma=sigma, kind=kind), z)


def assemble_dataset(
    raw: RawTrajectories,
    testbed: str,
    n_noise: int = 3,
    seed: int = 0,
    noise_cutoff: float = 0.02,
) -> TimeSeriesDataset:
    """
    Build the channel set: two physical inputs, their raw product, then ``n_noise`` noise
    channels. Every channel and the target are standardized independently.
    """
    layout = LAYOUTS.get(testbed)
    if layout is None:
        raise DataError(f"Unknown testbed: {testbed}", code="UNKNOWN_TESTBED")

    n = len(raw.t)
    for name, values in raw.signals.items():
        if len(values) != n:
            raise DataError(
                f"Raw signal {name} has {len(values)} samples, grid has {n}", code="SHAPE_ERROR"
            )

    first, second = (np.asarray(raw[name], dtype=float) for name in layout.inputs)
    channels = [
        _channel(layout.inputs[0], first, "physical"),
        _channel(layout.inputs[1], second, "physical"),
        _channel(layout.interaction, first * second, "interaction"),
    ]
    for i in range(n_noise):
        noise = smoothed_noise(n, noise_cutoff, (seed, i + 1))
        channels.append(_channel(f"noise{i + 1}", noise, "noise"))

    target = _channel(layout.target, np.asarray(raw[layout.target], dtype=float), "target")
    logger.debug(f"Assembled {testbed} dataset with channels {[c.name for c in channels]}")
    return TimeSeriesDataset(t=np.asarray(raw.t, dtype=float), channels=tuple(channels), target=target, testbed=testbed)


def chrono_split(
    dataset: TimeSeriesDataset,
    train_frac: float = 0.8,
    val_frac_of_train: float = 0.2,
    warmup_steps: int = 50,
) -> TimeSeriesDataset:
    """
    Contiguous train / validation / test segments. Validation is the last
    ``val_frac_of_train`` of the first ``train_frac`` of samples.

    Raises:
        DataError: any segment shorter than warmup_steps + 1.
    """
    if not 0 < train_frac < 1 or not 0 < val_frac_of_train < 1:
        raise DataError("Split fractions must lie in (0, 1)", code="SPLIT_TOO_SMALL")

    n = len(dataset)
    val_end = int(round(n * train_frac))
    train_end = val_end - int(round(val_end * val_frac_of_train))
    lengths = {"train": train_end, "val": val_end - train_end, "test": n - val_end}

    short = {name: size for name, size in lengths.items() if size < warmup_steps + 1}
    if short:
        raise DataError(
            f"Segments too short for a {warmup_steps}-step warm-up: {short}",
            code="SPLIT_TOO_SMALL",
            details={"segments": short},
        )
    return replace(dataset, split=Split(train_end=train_end, val_end=val_end))


def generate_dataset(testbed: str, run_config: RunConfig) -> TimeSeriesDataset:
    """Simulate, assemble and split one testbed dataset."""
    simulate = SIMULATORS.get(testbed)
    if simulate is None:
        raise DataError(f"Unknown testbed: {testbed}", code="UNKNOWN_TESTBED")

    sim_cfg = run_config.testbed_config(testbed)
    ds_cfg: DatasetConfig = run_config.dataset
    raw = simulate(sim_cfg)
    dataset = assemble_dataset(raw, testbed, ds_cfg.n_noise, sim_cfg.seed, ds_cfg.noise_cutoff)
    dataset = chrono_split(
        dataset, ds_cfg.train_frac, ds_cfg.val_frac_of_train, run_config.train.warmup_steps
    )
    logger.info(f"Generated {testbed} dataset: {len(dataset)} samples, split {dataset.split}")
    return dataset
