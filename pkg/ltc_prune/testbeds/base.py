"""Shared testbed types: raw simulator output and channel layouts."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class RawTrajectories:
    """Unstandardized simulator output on one time grid."""
    testbed: str
    t: np.ndarray
    signals: dict[str, np.ndarray] = field(default_factory=dict)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.signals[name]

    def __len__(self) -> int:
        return len(self.t)


@dataclass(frozen=True)
class ChannelLayout:
    """Which raw signals become inputs, interaction and target."""
    inputs: tuple[str, str]
    interaction: str
    target: str


LAYOUTS: dict[str, ChannelLayout] = {
    "mechanical": ChannelLayout(inputs=("F", "x"), interaction="F_x_interaction", target="xdot"),
    "cstr": ChannelLayout(inputs=("F_in", "V"), interaction="F_in_V_interaction", target="C_A"),
    "predprey": ChannelLayout(inputs=("Prey", "alpha"), interaction="alpha_Prey_interaction", target="Predator"),
}
