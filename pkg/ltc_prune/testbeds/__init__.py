"""Mechanistic testbeds: ODE simulation and dataset assembly."""

from .base import LAYOUTS, ChannelLayout, RawTrajectories
from .cstr import simulate_cstr
from .dataset import (
    SIMULATORS,
    Channel,
    TimeSeriesDataset,
    assemble_dataset,
    chrono_split,
    generate_dataset,
    standardize,
)
from .integrate import integrate, rk4_step, time_grid
from .mechanical import mechanical_energy, simulate_mechanical
from .noise import lag1_autocorrelation, smoothed_noise
from .predprey import lotka_volterra_invariant, simulate_predprey

__all__ = [
    # Integration
    "rk4_step",
    "integrate",
    "time_grid",
    "smoothed_noise",
    "lag1_autocorrelation",
    # Simulators
    "simulate_mechanical",
    "simulate_cstr",
    "simulate_predprey",
    "mechanical_energy",
    "lotka_volterra_invariant",
    "SIMULATORS",
    # Datasets
    "RawTrajectories",
    "ChannelLayout",
    "LAYOUTS",
    "Channel",
    "TimeSeriesDataset",
    "standardize",
    "assemble_dataset",
    "chrono_split",
    "generate_dataset",
]
