"""
Training of LTC observers: MSE loss, reverse-mode gradients through the unrolled
semi-implicit Euler updates, global-norm clipping, Adam, early stopping and
multi-seed selection.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, Sequence

import numpy as np
from scipy.special import expit

from .errors import DivergenceError, EvaluationError, TrainingError
from .ltc import PARAM_NAMES, LtcParameters, ObserverModel, forward, init_params, input_drive, restrict_model
from .schemas import SegmentName, TrainConfig, TrainingMeta, TrainReport
from .testbeds import TimeSeriesDataset

logger = logging.getLogger(__name__)

Gradients = dict[str, np.ndarray]


# ============ Loss ============

def mse_loss(pred: np.ndarray, ref: np.ndarray, skip: int = 0) -> float:
    """Mean squared error over time indices >= skip (last axis is time)."""
    pred = np.asarray(pred, dtype=float)
    ref = np.asarray(ref, dtype=float)
    if pred.shape != ref.shape:
        raise EvaluationError(f"Prediction shape {pred.shape} differs from reference {ref.shape}")
    if pred.shape[-1] <= skip:
        raise EvaluationError(f"Sequence of length {pred.shape[-1]} leaves nothing after skipping {skip}")
    diff = pred[..., skip:] - ref[..., skip:]
    return float(np.mean(diff * diff))


# ============ Reverse-mode gradients ============

@dataclass
class _Tape:
    """Per-step intermediates of an unrolled batch, all (B, T, .)."""
    phi: np.ndarray    # tanh(u_n)
    s: np.ndarray      # tanh(h_{n-1})
    drive: np.ndarray
    h: np.ndarray


def _unroll(
    params: LtcParameters, dt: float, inputs: np.ndarray, order: Optional[Sequence[int]] = None
) -> tuple[_Tape, np.ndarray]:
    batch, steps, _ = inputs.shape
    hsize = params.hidden_size
    a = dt / params.tau()
    denom = 1.0 + a

    phi = np.tanh(inputs)
    external = input_drive(params, phi, order)
    s_all = np.empty((batch, steps, hsize))
    drive_all = np.empty((batch, steps, hsize))
    h_all = np.empty((batch, steps, hsize))

    h = np.zeros((batch, hsize))
    for n in range(steps):
        s = np.tanh(h)
        drive = external[:, n] + s @ params.w_rec.T
        h = (h + a * drive) / denom
        s_all[:, n] = s
        drive_all[:, n] = drive
        h_all[:, n] = h

    estimate = h_all @ params.readout_w + params.readout_b
    return _Tape(phi=phi, s=s_all, drive=drive_all, h=h_all), estimate


def backward(
    model: ObserverModel,
    inputs: np.ndarray,
    target: np.ndarray,
    skip: int = 0,
    reduction: Literal["mean", "sum"] = "mean",
) -> tuple[float, Gradients]:
    """
    Loss and exact gradients of the discretized observer, by a reverse sweep over the
    stored step intermediates. Every sequence starts from a zero hidden state.

    Args:
        model: Observer whose parameters are differentiated.
        inputs: (T, d) or a batch (B, T, d).
        target: (T,) or (B, T).
        skip: Leading steps excluded from the loss.
        reduction: "mean" over all counted terms, or their "sum".

    Returns:
        (loss, gradients keyed like ``LtcParameters.as_arrays()``)
    """
    inputs = np.asarray(inputs, dtype=float)
    target = np.asarray(target, dtype=float)
    if inputs.ndim == 2:
        inputs, target = inputs[None], target[None]
    batch, steps, _ = inputs.shape
    if steps <= skip:
        raise EvaluationError(f"Sequence of length {steps} leaves nothing after skipping {skip}")

    params = model.params
    tape, estimate = _unroll(params, model.dt, inputs, model.input_order)

    err = estimate - target
    err[:, :skip] = 0.0
    count = batch * (steps - skip)
    total = float(np.sum(err * err))
    loss = total / count if reduction == "mean" else total
    dy = err * (2.0 / count if reduction == "mean" else 2.0)

    a = model.dt / params.tau()
    denom = 1.0 + a
    drive_gain = a / denom

    # dL/dh_n, accumulated backwards through the recurrence
    g_h = np.empty_like(tape.h)
    carry = np.zeros((batch, params.hidden_size))
    for n in range(steps - 1, -1, -1):
        g = dy[:, n, None] * params.readout_w + carry
        g_h[:, n] = g
        carry = g / denom + ((g * drive_gain) @ params.w_rec) * (1.0 - tape.s[:, n] ** 2)

    g_drive = g_h * drive_gain
    g_a = np.einsum("bth,bth->h", g_h, tape.drive - tape.h) / denom
    tau = params.tau()

    grads: Gradients = {
        "tau_raw": g_a * (-model.dt / tau**2) * expit(params.tau_raw),
        "b": g_drive.sum(axis=(0, 1)),
        "w_rec": np.einsum("bth,btk->hk", g_drive, tape.s),
        "w_in": np.einsum("bth,btd->hd", g_drive, tape.phi),
        "readout_w": np.einsum("bt,bth->h", dy, tape.h),
        "readout_b": np.asarray(dy.sum()),
    }

    for name, g in grads.items():
        if not np.all(np.isfinite(g)):
            bad = np.argwhere(~np.isfinite(np.atleast_1d(g)))[0][0]
            raise DivergenceError(int(bad), f"gradient of {name}")
    return loss, grads


# ============ Optimiser ============

def global_norm(grads: Gradients) -> float:
    return float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))


def clip_gradients(grads: Gradients, max_norm: float) -> Gradients:
    """Scale all gradients by max_norm / norm when the global L2 norm exceeds max_norm."""
    norm = global_norm(grads)
    if norm <= max_norm:
        return grads
    scale = max_norm / norm
    logger.debug(f"Clipped gradient norm {norm:.4g} -> {max_norm:.4g}")
    return {name: g * scale for name, g in grads.items()}


@dataclass(frozen=True)
class AdamState:
    """First and second moments per parameter plus the step counter."""
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros(cls, params: LtcParameters) -> "AdamState":
        arrays = params.as_arrays()
        return cls(
            m={k: np.zeros_like(v) for k, v in arrays.items()},
            v={k: np.zeros_like(v) for k, v in arrays.items()},
        )


def adam_update(
    params: LtcParameters, grads: Gradients, state: AdamState, lr: float
) -> tuple[LtcParameters, AdamState]:
    """One bias-corrected Adam step; returns new parameters and state."""
    step = state.step + 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1.0 - b1**step
    correction2 = 1.0 - b2**step

    current = params.as_arrays()
    new_params, new_m, new_v = {}, {}, {}
    for name in PARAM_NAMES:
        g = grads[name]
        m = b1 * state.m[name] + (1.0 - b1) * g
        v = b2 * state.v[name] + (1.0 - b2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        new_params[name] = current[name] - lr * m_hat / (np.sqrt(v_hat) + state.eps)
        new_m[name], new_v[name] = m, v

    new_state = AdamState(m=new_m, v=new_v, step=step, beta1=b1, beta2=b2, eps=state.eps)
    return LtcParameters.from_arrays(new_params), new_state


# ============ Training loop ============

def _window_starts(length: int, window_len: int, stride: int) -> list[int]:
    """Strided window starts; the last window always ends on the final sample."""
    if length <= window_len:
        return [0]
    starts = list(range(0, length - window_len + 1, stride))
    if starts[-1] != length - window_len:
        starts.append(length - window_len)
    return starts


def _resolve_channels(dataset: TimeSeriesDataset, channels: Iterable[str]) -> list[str]:
    wanted = set(channels)
    if not wanted:
        raise TrainingError("Cannot train on an empty channel set")
    unknown = sorted(wanted - set(dataset.channel_names))
    if unknown:
        raise TrainingError(f"Channels not in dataset: {unknown}")
    return [name for name in dataset.channel_names if name in wanted]


def train(
    dataset: TimeSeriesDataset,
    channels: Iterable[str],
    cfg: TrainConfig,
    seed: Optional[int] = None,
    init: Optional[ObserverModel] = None,
) -> tuple[ObserverModel, TrainReport]:
    """
    Train one observer on overlapping windows of the training segment.

    Each window starts from a zero hidden state and skips ``warmup_steps`` in its loss.
    After every epoch the validation segment is scored from a fresh state; the parameters
    with the lowest validation loss are returned.

    Args:
        init: Start from this model's parameters instead of a fresh draw. Its channels must
            be the trained channels. The starting parameters are scored first, so the result
            is never worse on validation than ``init``.
    """
    seed = cfg.seed if seed is None else seed
    names = _resolve_channels(dataset, channels)
    if init is not None:
        if sorted(init.channel_names) != sorted(names):
            raise TrainingError(
                f"Warm start channels {list(init.channel_names)} differ from {names}"
            )
        if init.hidden_size != cfg.hidden_size:
            raise TrainingError(f"Warm start has {init.hidden_size} neurons, config asks for {cfg.hidden_size}")
        init = restrict_model(init, names)
        names = list(init.channel_names)
    if dataset.split is None:
        raise TrainingError("Dataset has no chronological split")

    x_train, y_train = dataset.segment("train", names)
    x_val, y_val = dataset.segment("val", names)
    if min(len(y_train), len(y_val)) <= cfg.warmup_steps:
        raise TrainingError(
            f"Segments (train {len(y_train)}, val {len(y_val)}) must exceed warm-up {cfg.warmup_steps}"
        )

    window_len = min(cfg.window_len, len(y_train))
    starts = _window_starts(len(y_train), window_len, cfg.window_stride)
    x_windows = np.stack([x_train[s:s + window_len] for s in starts])
    y_windows = np.stack([y_train[s:s + window_len] for s in starts])

    model = ObserverModel(
        params=init_params(cfg.hidden_size, len(names), seed) if init is None else init.params,
        channel_names=tuple(names),
        dt=cfg.dt,
        seed=seed,
    )
    state = AdamState.zeros(model.params)

    report = TrainReport(seed=seed, channels=names, warm_start=init is not None)
    best_params, best_val, best_epoch = model.params, float("inf"), -1
    if init is not None:
        _, pred = forward(model, x_val)
        best_val = mse_loss(pred, y_val, cfg.warmup_steps)
        logger.debug(f"Warm start seed {seed}: initial val {best_val:.5f}")
    train_hist: list[float] = []
    val_hist: list[float] = []
    stale = 0
    stop_reason = "max_epochs"

    for epoch in range(cfg.max_epochs):
        batch_losses = []
        for first in range(0, len(starts), cfg.batch_windows):
            last = first + cfg.batch_windows
            loss, grads = backward(model, x_windows[first:last], y_windows[first:last], cfg.warmup_steps)
            grads = clip_gradients(grads, cfg.clip_norm)
            params, state = adam_update(model.params, grads, state, cfg.lr)
            model = model.with_params(params)
            batch_losses.append(loss)

        _, pred = forward(model, x_val)
        val_loss = mse_loss(pred, y_val, cfg.warmup_steps)
        train_hist.append(float(np.mean(batch_losses)))
        val_hist.append(val_loss)
        logger.debug(f"seed {seed} epoch {epoch}: train {train_hist[-1]:.5f} val {val_loss:.5f}")

        if val_loss < best_val:
            best_params, best_val, best_epoch = model.params, val_loss, epoch
            stale = 0
        else:
            stale += 1
            if stale > cfg.patience:
                stop_reason = "early_stop"
                break

    epochs_run = len(val_hist)
    report = report.model_copy(update={
        "train_loss": train_hist,
        "val_loss": val_hist,
        "best_epoch": best_epoch,
        "best_val_loss": best_val,
        "epochs_run": epochs_run,
        "stop_reason": stop_reason,
    })
    meta = TrainingMeta(epochs_run=epochs_run, best_epoch=best_epoch, best_val_loss=best_val)
    logger.info(
        f"Trained {names} seed {seed}: best val {best_val:.5f} at epoch {best_epoch} "
        f"({stop_reason}, {epochs_run} epochs)"
    )
    return model.with_params(best_params, training_meta=meta), report


def multi_seed_train(
    dataset: TimeSeriesDataset,
    channels: Iterable[str],
    cfg: TrainConfig,
    warm_start: Optional[ObserverModel] = None,
) -> tuple[ObserverModel, list[TrainReport]]:
    """
    Train ``cfg.n_seeds`` models (seeds seed, seed+1, ...) and keep the best on validation.

    With ``warm_start`` one more candidate continues from that model's parameters; it wins
    only when strictly better than every fresh seed.
    """
    channels = list(channels)
    best_model: Optional[ObserverModel] = None
    best_loss = float("inf")
    reports = []

    candidates: list[tuple[int, Optional[ObserverModel]]] = [(cfg.seed + k, None) for k in range(cfg.n_seeds)]
    if warm_start is not None:
        candidates.append((warm_start.seed, warm_start))

    origin = ""
    for seed, init in candidates:
        model, report = train(dataset, channels, cfg, seed=seed, init=init)
        reports.append(report)
        if best_model is None or report.best_val_loss < best_loss:
            best_model, best_loss = model, report.best_val_loss
            origin = "warm start" if init is not None else f"seed {seed}"

    assert best_model is not None
    logger.info(f"Selected {origin} of {len(candidates)} candidates (val {best_loss:.5f})")
    return best_model, reports


# ============ Evaluation ============

def predict_segment(
    model: ObserverModel, dataset: TimeSeriesDataset, segment: SegmentName
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(t, truth, prediction) over one segment, from a zero hidden state."""
    start, stop = dataset.bounds(segment)
    inputs, truth = dataset.segment(segment, model.channel_names)
    _, pred = forward(model, inputs)
    return dataset.t[start:stop], truth, pred


def evaluate(
    model: ObserverModel,
    dataset: TimeSeriesDataset,
    segment: SegmentName,
    warmup_steps: int = 50,
) -> dict[str, float]:
    """MSE and RMSE in standardized target units over indices >= warmup_steps."""
    _, truth, pred = predict_segment(model, dataset, segment)
    if len(truth) <= warmup_steps:
        raise EvaluationError(
            f"{segment} segment has {len(truth)} samples, needs more than warm-up {warmup_steps}"
        )
    mse = mse_loss(pred, truth, warmup_steps)
    return {"mse": mse, "rmse": float(np.sqrt(mse))}
