"""Forced spring-mass-damper testbed."""

import logging

import numpy as np

from ..schemas import MechanicalConfig
from .base import RawTrajectories
from .integrate import integrate, time_grid
from .noise import smoothed_noise

logger = logging.getLogger(__name__)


def simulate_mechanical(cfg: MechanicalConfig) -> RawTrajectories:
    """
    Integrate m x'' + c x' + k x = F(t) in first-order form [x, x'].

    F(t) is smoothed Gaussian noise of amplitude ``cfg.force_amplitude``, held constant
    within each RK4 step.

    Returns:
        RawTrajectories with signals x, xdot and F.
    """
    t = time_grid(cfg.duration, cfg.dt)
    force = smoothed_noise(len(t), cfg.force_cutoff, cfg.seed, amplitude=cfg.force_amplitude)

    m, c, k = cfg.m, cfg.c, cfg.k

    def deriv(_t: float, y: np.ndarray, f: float) -> np.ndarray:
        x, v = y
        return np.array([v, (f - c * v - k * x) / m])

    states = integrate(deriv, np.array([cfg.x0, cfg.v0]), t, hold=force)
    logger.info(f"Mechanical testbed: {len(t)} samples, max |x| = {np.abs(states[:, 0]).max():.3g}")

    return RawTrajectories(
        testbed="mechanical",
        t=t,
        signals={"x": states[:, 0], "xdot": states[:, 1], "F": force},
    )


def mechanical_energy(raw: RawTrajectories, cfg: MechanicalConfig) -> np.ndarray:
    """Total energy m v^2 / 2 + k x^2 / 2 per sample."""
    return 0.5 * cfg.m * raw["xdot"] ** 2 + 0.5 * cfg.k * raw["x"] ** 2
