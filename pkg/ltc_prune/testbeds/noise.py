"""Temporally correlated Gaussian noise."""

from typing import Sequence, Union

import numpy as np
from scipy.signal import lfilter

from ..errors import DataError

Seed = Union[int, Sequence[int]]


def smoothed_noise(length: int, cutoff: float, seed: Seed, amplitude: float = 1.0) -> np.ndarray:
    """
    Low-pass filtered Gaussian white noise.

    A single-pole smoother y[n] = a*y[n-1] + (1-a)*w[n] with a = exp(-2*pi*cutoff) runs
    forward and then backward (zero phase). The result is rescaled to zero sample mean and
    unit sample std, then multiplied by ``amplitude``.

    Args:
        length: Number of samples.
        cutoff: Fraction of Nyquist in (0, 1); lower is smoother.
        seed: Anything ``numpy.random.default_rng`` accepts.
        amplitude: Standard deviation of the returned sequence.
    """
    if length <= 0:
        raise DataError("smoothed_noise needs at least one sample", code="EMPTY_INPUT")
    if not 0 < cutoff < 1:
        raise ValueError(f"cutoff must lie in (0, 1), got {cutoff}")

    rng = np.random.default_rng(seed)
    white = rng.standard_normal(length)

    a = np.exp(-2 * np.pi * cutoff)
    num, den = [1 - a], [1.0, -a]
    y = lfilter(num, den, white)
    y = lfilter(num, den, y[::-1])[::-1]

    if length > 1:
        y = y - y.mean()
        std = y.std(ddof=1)
        if std > 0:
            y = y / std
    return amplitude * y


def lag1_autocorrelation(x: np.ndarray) -> float:
    """Sample lag-1 autocorrelation."""
    x = np.asarray(x, dtype=float) - np.mean(x)
    return float(np.dot(x[:-1], x[1:]) / np.dot(x, x))
