"""Classical fourth-order Runge-Kutta integration on a uniform grid."""

import logging
from typing import Callable, Optional

import numpy as np

from ..errors import IntegrationError

logger = logging.getLogger(__name__)

Derivative = Callable[[float, np.ndarray], np.ndarray]
HeldDerivative = Callable[[float, np.ndarray, np.ndarray], np.ndarray]
StepCheck = Callable[[int, float, np.ndarray], None]


def _stage(deriv: Derivative, t: float, y: np.ndarray) -> np.ndarray:
    k = np.asarray(deriv(t, y), dtype=float)
    if not np.all(np.isfinite(k)):
        raise IntegrationError(t)
    return k


def rk4_step(deriv: Derivative, t: float, y: np.ndarray, dt: float) -> np.ndarray:
    """
    Advance ``y`` by one RK4 step.

    Args:
        deriv: f(t, y) returning dy/dt.
        t: Time at the start of the step.
        y: State vector at t.
        dt: Step size, must be positive.

    Returns:
        y + (dt/6)(k1 + 2k2 + 2k3 + k4)
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    y = np.asarray(y, dtype=float)
    k1 = _stage(deriv, t, y)
    k2 = _stage(deriv, t + dt / 2, y + 0.5 * dt * k1)
    k3 = _stage(deriv, t + dt / 2, y + 0.5 * dt * k2)
    k4 = _stage(deriv, t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def time_grid(duration: float, dt: float) -> np.ndarray:
    """Uniform grid 0, dt, ..., duration with round(duration/dt) + 1 samples."""
    n_steps = int(round(duration / dt))
    return np.arange(n_steps + 1, dtype=float) * dt


def integrate(
    deriv: HeldDerivative,
    y0: np.ndarray,
    t: np.ndarray,
    hold: Optional[np.ndarray] = None,
    check: Optional[StepCheck] = None,
) -> np.ndarray:
    """
    Integrate over the grid ``t`` with exogenous samples held constant within each step.

    ``deriv(t, y, u)`` receives ``u = hold[n]`` for the whole step n -> n+1 (zero-order hold).
    ``check(n, t_n, y_n)`` runs on every new state and may raise to abort.
    """
    y0 = np.asarray(y0, dtype=float)
    n = len(t)
    out = np.empty((n, y0.size), dtype=float)
    out[0] = y0
    if check:
        check(0, float(t[0]), out[0])

    for i in range(n - 1):
        u = hold[i] if hold is not None else None
        dt = float(t[i + 1] - t[i])
        out[i + 1] = rk4_step(lambda tt, yy: deriv(tt, yy, u), float(t[i]), out[i], dt)
        if check:
            check(i + 1, float(t[i + 1]), out[i + 1])

    logger.debug(f"Integrated {n - 1} RK4 steps over [{t[0]:.3g}, {t[-1]:.3g}]")
    return out
