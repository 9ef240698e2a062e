"""Shared fixtures: small datasets and models that keep unit tests fast."""

import numpy as np
import pytest

from ltc_prune.ltc import LtcParameters, ObserverModel, init_params
from ltc_prune.schemas import ChannelMeta, Split, TrainConfig
from ltc_prune.testbeds import Channel, TimeSeriesDataset


def make_dataset(n: int = 240, names=("a", "b", "noise1"), seed: int = 0, target_from: str = "a") -> TimeSeriesDataset:
    """Standard-normal-ish channels; the target is a smoothed copy of ``target_from``."""
    rng = np.random.default_rng(seed)
    t = np.arange(n) * 0.05
    channels = []
    for i, name in enumerate(names):
        values = np.sin(0.3 * (i + 1) * t + i) + 0.1 * rng.standard_normal(n)
        values = (values - values.mean()) / values.std(ddof=1)
        channels.append(Channel(ChannelMeta(name=name, mu=0.0, sigma=1.0, kind="physical"), values))
    source = channels[names.index(target_from)].values
    target = np.convolve(source, np.ones(3) / 3, mode="same")
    target = (target - target.mean()) / target.std(ddof=1)
    return TimeSeriesDataset(
        t=t,
        channels=tuple(channels),
        target=Channel(ChannelMeta(name="y", mu=2.0, sigma=3.0, kind="target"), target),
        split=Split(train_end=int(n * 0.6), val_end=int(n * 0.8)),
        testbed=None,
    )


def zero_column_model(model: ObserverModel, column: int) -> ObserverModel:
    arrays = model.params.as_arrays()
    w_in = arrays["w_in"].copy()
    w_in[:, column] = 0.0
    return model.with_params(LtcParameters.from_arrays({**arrays, "w_in": w_in}))


@pytest.fixture
def dataset() -> TimeSeriesDataset:
    return make_dataset()


@pytest.fixture
def model() -> ObserverModel:
    return ObserverModel(params=init_params(4, 3, seed=1), channel_names=("a", "b", "noise1"))


@pytest.fixture
def tiny_train_cfg() -> TrainConfig:
    return TrainConfig(
        hidden_size=4,
        max_epochs=3,
        patience=5,
        warmup_steps=5,
        window_len=40,
        window_stride=40,
        n_seeds=2,
        lr=1e-2,
    )
