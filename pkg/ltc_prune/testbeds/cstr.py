"""Continuous stirred-tank reactor testbed."""

import logging

import numpy as np

from ..errors import VolumeDepletionError
from ..schemas import CstrConfig
from .base import RawTrajectories
from .integrate import integrate, time_grid
from .noise import smoothed_noise

logger = logging.getLogger(__name__)


def simulate_cstr(cfg: CstrConfig) -> RawTrajectories:
    """
    Integrate the reactor volume and concentration balances.

        dV/dt   = F_in - F_out
        d(C_A V)/dt = F_in C_A,in - F_out C_A - k C_A V

    Expanding the product rule, dC_A/dt = F_in (C_A,in - C_A) / V - k C_A; F_out cancels.
    F_in is the mean inflow plus smoothed noise, clipped at zero.

    Raises:
        VolumeDepletionError: V <= 0 at any step.
    """
    t = time_grid(cfg.duration, cfg.dt)
    inflow = cfg.inflow_mean + smoothed_noise(
        len(t), cfg.inflow_cutoff, cfg.seed, amplitude=cfg.inflow_amplitude
    )
    inflow = np.clip(inflow, 0.0, None)

    f_out, c_in, k = cfg.f_out, cfg.c_a_in, cfg.k_rate

    def deriv(_t: float, y: np.ndarray, f_in: float) -> np.ndarray:
        v, c_a = y
        return np.array([f_in - f_out, f_in * (c_in - c_a) / v - k * c_a])

    def check(_n: int, t_n: float, y: np.ndarray) -> None:
        if not y[0] > 0:
            raise VolumeDepletionError(t_n, float(y[0]))

    states = integrate(deriv, np.array([cfg.v0, cfg.c_a0]), t, hold=inflow, check=check)
    logger.info(
        f"CSTR testbed: {len(t)} samples, V in [{states[:, 0].min():.3g}, {states[:, 0].max():.3g}]"
    )

    return RawTrajectories(
        testbed="cstr",
        t=t,
        signals={"V": states[:, 0], "C_A": states[:, 1], "F_in": inflow},
    )
