"""
LTC Prune - Pydantic Validation Schemas
Run configuration (one model per TOML table) and every JSON artifact written to disk.
"""

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import SCHEMA_VERSION

TestbedId = Literal["mechanical", "cstr", "predprey"]
SegmentName = Literal["train", "val", "test"]
ChannelKind = Literal["physical", "noise", "interaction", "target"]

TESTBEDS: tuple[str, ...] = ("mechanical", "cstr", "predprey")


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ============ Testbed Configs ============

class _SimulationConfig(_Frozen):
    """Shared time grid and seed for every testbed."""
    duration: float = Field(default=200.0, gt=0, description="Total simulated time")
    dt: float = Field(default=0.05, gt=0, description="RK4 step and sample spacing")
    seed: int = Field(default=0, ge=0, description="RNG seed for exogenous noise")

    @model_validator(mode="after")
    def _check_grid(self):
        if self.duration < 100 * self.dt - 1e-12:
            raise ValueError("duration must be at least 100 * dt")
        return self

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


class MechanicalConfig(_SimulationConfig):
    """Spring-mass-damper m x'' + c x' + k x = F(t)."""
    m: float = Field(default=1.0, gt=0)
    c: float = Field(default=0.3, ge=0)
    k: float = Field(default=2.0, gt=0)
    x0: float = 0.5
    v0: float = 0.0
    force_cutoff: float = Field(default=0.02, gt=0, lt=1, description="Fraction of Nyquist")
    force_amplitude: float = Field(default=1.0, ge=0, description="0 switches the forcing off")


class CstrConfig(_SimulationConfig):
    """Continuous stirred-tank reactor with modulated inflow."""
    f_out: float = Field(default=1.0, ge=0)
    c_a_in: float = Field(default=1.0, ge=0)
    k_rate: float = Field(default=0.1, ge=0)
    v0: float = Field(default=10.0, gt=0)
    c_a0: float = Field(default=0.5, ge=0)
    inflow_cutoff: float = Field(default=0.02, gt=0, lt=1)
    inflow_mean: float = Field(default=1.0, gt=0)
    inflow_amplitude: float = Field(default=0.1, ge=0, description="0 holds F_in at its mean")


class PredPreyConfig(_SimulationConfig):
    """Lotka-Volterra with seasonal and environmental forcing of prey growth."""
    alpha_base: float = 1.0
    alpha_amp: float = Field(default=0.3, ge=0)
    alpha_period: float = Field(default=25.0, gt=0)
    alpha_noise_cutoff: float = Field(default=0.02, gt=0, lt=1)
    alpha_noise_amplitude: float = Field(default=0.1, ge=0, description="0 switches the noise off")
    beta: float = Field(default=0.4, ge=0, description="0 decouples prey from predation")
    delta: float = Field(default=0.1, gt=0)
    gamma: float = Field(default=0.4, gt=0)
    prey0: float = Field(default=10.0, gt=0)
    pred0: float = Field(default=5.0, gt=0)

    @model_validator(mode="after")
    def _check_alpha(self):
        if not self.alpha_base > self.alpha_amp:
            raise ValueError("alpha_base must exceed alpha_amp")
        return self


class DatasetConfig(_Frozen):
    """Channel augmentation and chronological split."""
    n_noise: int = Field(default=3, ge=0)
    noise_cutoff: float = Field(default=0.02, gt=0, lt=1)
    train_frac: float = Field(default=0.8, gt=0, lt=1)
    val_frac_of_train: float = Field(default=0.2, gt=0, lt=1)


# ============ Model / Training Configs ============

class TrainConfig(_Frozen):
    """Observer architecture and optimisation settings."""
    hidden_size: int = Field(default=32, ge=1)
    dt: float = Field(default=0.05, gt=0, description="Semi-implicit Euler step")
    lr: float = Field(default=1e-3, gt=0)
    max_epochs: int = Field(default=100, ge=1)
    clip_norm: float = Field(default=1.0, gt=0)
    patience: int = Field(default=10, ge=0)
    warmup_steps: int = Field(default=50, ge=0)
    window_len: int = Field(default=128, ge=1)
    window_stride: int = Field(default=64, ge=1)
    batch_windows: int = Field(default=1, ge=1, description="Windows averaged per Adam update")
    n_seeds: int = Field(default=3, ge=1)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_window(self):
        if self.window_len <= self.warmup_steps:
            raise ValueError("window_len must exceed warmup_steps")
        return self


class PerturbationSpec(_Frozen):
    """Constant-offset perturbation used to score channels."""
    epsilon: float = Field(default=5e-3, gt=0, description="In channel standard deviations")
    window_start: Optional[int] = Field(default=None, ge=0, description="None = warm-up length")
    window_len: Optional[int] = Field(default=None, ge=1, description="None = rest of segment")
    segment: SegmentName = "val"

    @property
    def in_recommended_range(self) -> bool:
        return 1e-3 <= self.epsilon <= 1e-2


class PruneSettings(_Frozen):
    """Pruning decisions of the [prune] table."""
    threshold_mode: Literal["relative", "absolute"] = "relative"
    threshold_tau: float = Field(default=0.05, gt=0)
    degradation_tol: float = Field(default=0.10, ge=0)
    min_sensors: int = Field(default=1, ge=1)
    max_iters: int = Field(default=10, ge=1)
    max_removals: Optional[int] = Field(default=None, ge=1)
    probe_minimality: bool = False
    warm_start: bool = Field(default=True, description="Retrain also from the previous model minus removed inputs")


class PruneConfig(PruneSettings):
    """Everything the prune loop needs."""
    spec: PerturbationSpec = Field(default_factory=PerturbationSpec)
    train: TrainConfig = Field(default_factory=TrainConfig)


class RunConfig(_Frozen):
    """A whole TOML config file."""
    mechanical: MechanicalConfig = Field(default_factory=MechanicalConfig)
    cstr: CstrConfig = Field(default_factory=CstrConfig)
    predprey: PredPreyConfig = Field(default_factory=PredPreyConfig)
    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    causality: PerturbationSpec = Field(default_factory=PerturbationSpec)
    prune: PruneSettings = Field(default_factory=PruneSettings)

    def testbed_config(self, testbed: str) -> _SimulationConfig:
        return getattr(self, testbed)

    def prune_config(self) -> PruneConfig:
        return PruneConfig(**self.prune.model_dump(), spec=self.causality, train=self.train)


# ============ Dataset Artifacts ============

class ChannelMeta(_Frozen):
    """Standardization record of one channel."""
    name: str = Field(min_length=1)
    mu: float
    sigma: float = Field(gt=0)
    kind: ChannelKind


class Split(_Frozen):
    """Chronological boundaries: train [0, train_end), val [train_end, val_end), test [val_end, N)."""
    train_end: int = Field(gt=0)
    val_end: int = Field(gt=0)

    @model_validator(mode="after")
    def _check_order(self):
        if not self.train_end < self.val_end:
            raise ValueError("train_end must be below val_end")
        return self


class DatasetMetadata(BaseModel):
    """Companion JSON of a dataset CSV."""
    schema_version: int = SCHEMA_VERSION
    testbed: Optional[str] = None
    n_samples: int
    channels: list[ChannelMeta]
    target: ChannelMeta
    split: Optional[Split] = None

    @field_validator("channels")
    @classmethod
    def validate_unique_names(cls, v: list[ChannelMeta]) -> list[ChannelMeta]:
        names = [c.name for c in v]
        if len(set(names)) != len(names):
            raise ValueError("channel names must be unique")
        return v


# ============ Model Artifacts ============

class TrainingMeta(BaseModel):
    epochs_run: int = 0
    best_epoch: int = -1
    best_val_loss: Optional[float] = None


class ModelFile(BaseModel):
    """Serialized ObserverModel; arrays are row-major nested lists."""
    schema_version: int = SCHEMA_VERSION
    hidden_size: int = Field(ge=1)
    dt: float = Field(gt=0)
    tau_min: float = Field(gt=0)
    channel_names: list[str] = Field(min_length=1)
    seed: int
    training_meta: TrainingMeta = Field(default_factory=TrainingMeta)
    tau_raw: list[float]
    b: list[float]
    w_rec: list[list[float]]
    w_in: list[list[float]]
    readout_w: list[float]
    readout_b: float


class TrainReport(BaseModel):
    """Loss history of one training run."""
    schema_version: int = SCHEMA_VERSION
    seed: int
    channels: list[str]
    train_loss: list[float] = Field(default_factory=list)
    val_loss: list[float] = Field(default_factory=list)
    best_epoch: int = -1
    best_val_loss: float = float("inf")
    epochs_run: int = 0
    stop_reason: Literal["early_stop", "max_epochs"] = "max_epochs"
    warmup_skipped_in_training: bool = True
    warm_start: bool = Field(default=False, description="Continued from a previous model")

    @model_validator(mode="after")
    def _check_lengths(self):
        if len(self.train_loss) != len(self.val_loss) or len(self.val_loss) != self.epochs_run:
            raise ValueError("loss histories must have one entry per epoch run")
        return self


class EvaluationMetrics(BaseModel):
    """Metrics of a model on one dataset segment."""
    schema_version: int = SCHEMA_VERSION
    model_id: str
    segment: SegmentName
    target: str
    warmup_steps: int
    n_evaluated: int
    mse: float
    rmse: float
    mse_raw: float
    rmse_raw: float


# ============ Causality / Pruning Artifacts ============

class CausalityEntry(BaseModel):
    name: str
    score: float = Field(ge=0)
    rank: int = Field(ge=1)


class CausalityReport(BaseModel):
    """Per-channel causality scores ranked by descending score."""
    schema_version: int = SCHEMA_VERSION
    model_id: str
    segment: SegmentName
    spec: PerturbationSpec
    window_start: int
    window_len: int
    forward_passes: int
    entries: list[CausalityEntry]

    def scores(self) -> dict[str, float]:
        return {e.name: e.score for e in self.entries}

    def ranking(self) -> list[str]:
        return [e.name for e in sorted(self.entries, key=lambda e: e.rank)]


class RemovalProbe(BaseModel):
    """Outcome of retraining without one channel."""
    channel: str
    remaining: list[str]
    reference_loss: float
    val_loss: float
    relative_change: float
    degraded: bool


class IterationRecord(BaseModel):
    """One row of the pruning table."""
    iteration: int = Field(ge=0)
    channels: list[str]
    removed: list[str] = Field(default_factory=list)
    val_loss: float
    test_rmse: Optional[float] = None
    selected_seed: int
    model_id: str
    train_reports: list[TrainReport]
    causality: Optional[CausalityReport] = None


class PruneTrace(BaseModel):
    """Full record of a prune loop."""
    schema_version: int = SCHEMA_VERSION
    testbed: Optional[str] = None
    initial_channels: list[str]
    threshold_mode: str
    threshold_tau: float
    degradation_tol: float
    min_sensors: int
    iterations: list[IterationRecord] = Field(default_factory=list)
    stop_reason: Optional[Literal["degradation", "budget", "max_iters", "no_removable"]] = None
    final_iteration: Optional[int] = None
    last_iteration: Optional[int] = None
    final_channels: list[str] = Field(default_factory=list)
    final_model_id: Optional[str] = None
    sensor_reduction: Optional[float] = None
    probes: list[RemovalProbe] = Field(default_factory=list)


class RunManifest(BaseModel):
    """What a command ran, with which config, and what it wrote."""
    schema_version: int = SCHEMA_VERSION
    run_id: str
    command: str
    testbed: Optional[str] = None
    tool_version: str
    started_at: str
    finished_at: Optional[str] = None
    config: dict[str, Any]
    artifacts: dict[str, str] = Field(default_factory=dict)
    warnings: list[str] = Field(default_factory=list)
    warning_count: int = 0
