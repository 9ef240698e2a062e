"""LTC Prune - causality-guided sensor pruning for liquid time-constant observers."""

__version__ = "0.3.0"

from .causality import causality_report, causality_score, epsilon_sweep, perturb_channel, trajectory_delta
from .errors import LtcPruneError
from .ltc import ObserverModel, forward, init_params, ltc_step, model_fingerprint, readout
from .pruner import prune_loop, select_prunable, stop_check
from .schemas import PerturbationSpec, PruneConfig, RunConfig, TrainConfig
from .testbeds import generate_dataset
from .training import evaluate, multi_seed_train, train

__all__ = [
    "__version__",
    "LtcPruneError",
    # Data
    "generate_dataset",
    # Model
    "ObserverModel",
    "init_params",
    "ltc_step",
    "readout",
    "forward",
    "model_fingerprint",
    # Training
    "train",
    "multi_seed_train",
    "evaluate",
    # Causality
    "perturb_channel",
    "trajectory_delta",
    "causality_score",
    "causality_report",
    "epsilon_sweep",
    # Pruning
    "select_prunable",
    "stop_check",
    "prune_loop",
    # Config
    "RunConfig",
    "TrainConfig",
    "PerturbationSpec",
    "PruneConfig",
]
