"""
Liquid time-constant neurons and the observer model built from them.

Each neuron follows

    tau_i dh_i/dt = -(h_i - b_i) + sum_j w_rec[i, j] tanh(h_j) + sum_k w_in[i, k] tanh(u_k)

discretized with a semi-implicit Euler step (implicit in the leak, explicit in the drive):

    h_i' = (h_i + (dt / tau_i) * drive_i) / (1 + dt / tau_i)

The scalar estimate is an affine readout of h.
"""

import hashlib
import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ChannelError, DivergenceError, ModelError
from .schemas import TrainingMeta

logger = logging.getLogger(__name__)

TAU_MIN = 0.05
TAU_INIT = 1.0
PARAM_NAMES: tuple[str, ...] = ("tau_raw", "b", "w_rec", "w_in", "readout_w", "readout_b")

# Hidden state h, shape (H,) or (batch, H)
LtcState = np.ndarray


def softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def inverse_softplus(y: float) -> float:
    return float(np.log(np.expm1(y)))


@dataclass(frozen=True, eq=False)
class LtcParameters:
    """All learnable values of an observer."""
    tau_raw: np.ndarray    # (H,)  tau = softplus(tau_raw) + TAU_MIN
    b: np.ndarray          # (H,)
    w_rec: np.ndarray      # (H, H)
    w_in: np.ndarray       # (H, d)
    readout_w: np.ndarray  # (H,)
    readout_b: float

    @property
    def hidden_size(self) -> int:
        return self.b.shape[0]

    @property
    def input_dim(self) -> int:
        return self.w_in.shape[1]

    def tau(self) -> np.ndarray:
        return softplus(self.tau_raw) + TAU_MIN

    def as_arrays(self) -> dict[str, np.ndarray]:
        """Name -> array view; readout_b becomes a 0-d array."""
        return {
            "tau_raw": self.tau_raw,
            "b": self.b,
            "w_rec": self.w_rec,
            "w_in": self.w_in,
            "readout_w": self.readout_w,
            "readout_b": np.asarray(self.readout_b, dtype=float),
        }

    @classmethod
    def from_arrays(cls, arrays: dict[str, np.ndarray]) -> "LtcParameters":
        params = cls(
            tau_raw=np.array(arrays["tau_raw"], dtype=float),
            b=np.array(arrays["b"], dtype=float),
            w_rec=np.array(arrays["w_rec"], dtype=float),
            w_in=np.array(arrays["w_in"], dtype=float),
            readout_w=np.array(arrays["readout_w"], dtype=float),
            readout_b=float(arrays["readout_b"]),
        )
        params.check_shapes()
        return params

    def check_shapes(self) -> None:
        h = self.hidden_size
        expected = {"tau_raw": (h,), "w_rec": (h, h), "readout_w": (h,)}
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ModelError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        if self.w_in.ndim != 2 or self.w_in.shape[0] != h:
            raise ModelError(f"w_in has shape {self.w_in.shape}, expected ({h}, d)")


@dataclass(frozen=True, eq=False)
class ObserverModel:
    """Parameters bound to named input channels."""
    params: LtcParameters
    channel_names: tuple[str, ...]
    dt: float = 0.05
    seed: int = 0
    training_meta: TrainingMeta = field(default_factory=TrainingMeta)

    def __post_init__(self):
        if len(self.channel_names) != self.params.input_dim:
            raise ChannelError(
                f"{len(self.channel_names)} channel names for {self.params.input_dim} input weights",
                list(self.channel_names),
            )
        if not self.dt > 0:
            raise ModelError(f"dt must be positive, got {self.dt}")

    @property
    def hidden_size(self) -> int:
        return self.params.hidden_size

    @property
    def input_dim(self) -> int:
        return self.params.input_dim

    @property
    def input_order(self) -> list[int]:
        return canonical_order(self.channel_names)

    def with_params(self, params: LtcParameters, **changes) -> "ObserverModel":
        return replace(self, params=params, **changes)


# ============ Operations ============

def init_params(hidden_size: int, input_dim: int, seed: int) -> LtcParameters:
    """
    Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero bias, every tau = 1.
    """
    if hidden_size < 1 or input_dim < 1:
        raise ModelError(f"Invalid sizes: hidden_size={hidden_size}, input_dim={input_dim}")

    rng = np.random.default_rng(seed)

    def uniform(shape: tuple[int, ...], fan_in: int) -> np.ndarray:
        bound = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    return LtcParameters(
        tau_raw=np.full(hidden_size, inverse_softplus(TAU_INIT - TAU_MIN)),
        b=np.zeros(hidden_size),
        w_rec=uniform((hidden_size, hidden_size), hidden_size),
        w_in=uniform((hidden_size, input_dim), input_dim),
        readout_w=uniform((hidden_size,), hidden_size),
        readout_b=0.0,
    )


def _check_finite(h: np.ndarray, where: str = "hidden state") -> None:
    if not np.all(np.isfinite(h)):
        bad = np.argwhere(~np.isfinite(np.atleast_2d(h)))[0][-1]
        raise DivergenceError(int(bad), where)


def canonical_order(channel_names: Sequence[str]) -> list[int]:
    """Column indices sorted by channel name."""
    return sorted(range(len(channel_names)), key=lambda k: channel_names[k])


def input_drive(params: LtcParameters, phi: np.ndarray, order: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    b + sum_k w_in[:, k] * phi[..., k], summed column by column in ``order``.

    A fixed summation order makes the result bit-identical whatever the column layout,
    as long as ``order`` follows the channel names.
    """
    order = range(params.input_dim) if order is None else order
    drive = np.zeros(phi.shape[:-1] + (params.hidden_size,)) + params.b
    for k in order:
        drive += phi[..., k, None] * params.w_in[:, k]
    return drive


def ltc_step(
    h: LtcState,
    u: np.ndarray,
    params: LtcParameters,
    dt: float,
    order: Optional[Sequence[int]] = None,
) -> LtcState:
    """
    One semi-implicit Euler step. Works on a single state (H,) or a batch (B, H).
    """
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != params.input_dim:
        raise ChannelError(f"Input has {u.shape[-1]} channels, model expects {params.input_dim}")
    a = dt / params.tau()
    drive = input_drive(params, np.tanh(u), order) + np.tanh(h) @ params.w_rec.T
    h_next = (h + a * drive) / (1.0 + a)
    _check_finite(h_next)
    return h_next


def readout(h: LtcState, params: LtcParameters) -> np.ndarray | float:
    """readout_w . h + readout_b."""
    if np.shape(h)[-1] != params.hidden_size:
        raise ModelError(f"State has {np.shape(h)[-1]} neurons, readout expects {params.hidden_size}")
    return h @ params.readout_w + params.readout_b


def forward(
    model: ObserverModel,
    inputs: np.ndarray,
    h0: Optional[LtcState] = None,
    columns: Optional[Sequence[str]] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Run the observer over an input sequence.

    Args:
        model: Observer to simulate.
        inputs: (N, d) matrix ordered like ``model.channel_names``.
        h0: Initial hidden state, zeros by default.
        columns: Names of the input columns; checked against the model when given.

    Returns:
        (hidden trajectory (N, H), estimates (N,))
    """
    if columns is not None and tuple(columns) != tuple(model.channel_names):
        raise ChannelError(
            f"Input columns {list(columns)} do not match model channels {list(model.channel_names)}",
            list(columns),
        )
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim != 2 or inputs.shape[1] != model.input_dim:
        raise ChannelError(f"Inputs have shape {inputs.shape}, model expects (N, {model.input_dim})")

    params = model.params
    n, hsize = inputs.shape[0], model.hidden_size
    hidden = np.empty((n, hsize))
    if n == 0:
        return hidden, np.empty(0)

    # Input drive does not depend on h, so compute it for every step at once
    a = model.dt / params.tau()
    denom = 1.0 + a
    external = input_drive(params, np.tanh(inputs), model.input_order)
    h = np.zeros(hsize) if h0 is None else np.array(h0, dtype=float)

    for i in range(n):
        drive = external[i] + np.tanh(h) @ params.w_rec.T
        h = (h + a * drive) / denom
        hidden[i] = h

    _check_finite(hidden)
    return hidden, hidden @ params.readout_w + params.readout_b


def select_columns(available: Sequence[str], wanted: Iterable[str]) -> list[int]:
    """Indices of ``wanted`` names within ``available``, in ``wanted`` order."""
    available = list(available)
    missing = [name for name in wanted if name not in available]
    if missing:
        raise ChannelError(f"Missing channels: {missing}", missing)
    return [available.index(name) for name in wanted]


def restrict_channels(model: ObserverModel, keep: Iterable[str]) -> list[int]:
    """
    Column indices, in model order, of the kept channels.
    """
    keep = set(keep)
    if not keep:
        raise ChannelError("Channel selection is empty")
    unknown = sorted(keep - set(model.channel_names))
    if unknown:
        raise ChannelError(f"Unknown channels: {unknown}", unknown)
    return [i for i, name in enumerate(model.channel_names) if name in keep]


def restrict_model(model: ObserverModel, keep: Iterable[str]) -> ObserverModel:
    """Copy of ``model`` with the input weights of every channel outside ``keep`` deleted."""
    columns = restrict_channels(model, keep)
    arrays = model.params.as_arrays()
    params = LtcParameters.from_arrays({**arrays, "w_in": arrays["w_in"][:, columns]})
    names = tuple(model.channel_names[i] for i in columns)
    return replace(model, params=params, channel_names=names)


def model_fingerprint(model: ObserverModel) -> str:
    """Short SHA-256 identity over parameters, channels and solver step."""
    digest = hashlib.sha256()
    digest.update(repr((tuple(model.channel_names), model.hidden_size, model.dt)).encode())
    for name, array in model.params.as_arrays().items():
        digest.update(name.encode())
        digest.update(np.ascontiguousarray(array, dtype=np.float64).tobytes())
    return digest.hexdigest()[:16]
