"""Predator-prey testbed with seasonal and environmental forcing of prey growth."""

import logging

import numpy as np

from ..errors import PopulationError
from ..schemas import PredPreyConfig
from .base import RawTrajectories
from .integrate import integrate, time_grid
from .noise import smoothed_noise

logger = logging.getLogger(__name__)


def growth_rate(cfg: PredPreyConfig, t: np.ndarray) -> np.ndarray:
    """alpha(t) = alpha_base + alpha_amp sin(2 pi t / period) + smoothed noise."""
    seasonal = cfg.alpha_amp * np.sin(2 * np.pi * t / cfg.alpha_period)
    noise = smoothed_noise(len(t), cfg.alpha_noise_cutoff, cfg.seed, amplitude=cfg.alpha_noise_amplitude)
    return cfg.alpha_base + seasonal + noise


def simulate_predprey(cfg: PredPreyConfig) -> RawTrajectories:
    """
    Integrate
        dPrey/dt     = alpha(t) Prey - beta Prey Predator
        dPredator/dt = delta Prey Predator - gamma Predator

    Raises:
        PopulationError: a population is non-finite or non-positive.
    """
    t = time_grid(cfg.duration, cfg.dt)
    alpha = growth_rate(cfg, t)
    beta, delta, gamma = cfg.beta, cfg.delta, cfg.gamma

    def deriv(_t: float, y: np.ndarray, a: float) -> np.ndarray:
        prey, pred = y
        return np.array([a * prey - beta * prey * pred, delta * prey * pred - gamma * pred])

    def check(n: int, t_n: float, y: np.ndarray) -> None:
        for value, species in zip(y, ("Prey", "Predator")):
            if not (np.isfinite(value) and value > 0):
                raise PopulationError(t_n, n, species)

    states = integrate(deriv, np.array([cfg.prey0, cfg.pred0]), t, hold=alpha, check=check)
    logger.info(f"Predator-prey testbed: {len(t)} samples, max Predator = {states[:, 1].max():.3g}")

    return RawTrajectories(
        testbed="predprey",
        t=t,
        signals={"Prey": states[:, 0], "Predator": states[:, 1], "alpha": alpha},
    )


def lotka_volterra_invariant(prey: np.ndarray, pred: np.ndarray, cfg: PredPreyConfig) -> np.ndarray:
    """First integral of the unforced system: delta P - gamma ln P + beta Q - alpha ln Q."""
    return (
        cfg.delta * prey
        - cfg.gamma * np.log(prey)
        + cfg.beta * pred
        - cfg.alpha_base * np.log(pred)
    )
