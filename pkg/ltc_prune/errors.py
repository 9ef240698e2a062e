"""
LTC Prune - Error Handling
Every failure carries a code, a message, a process exit code and structured details.
"""

from typing import Optional


class LtcPruneError(Exception):
    """Base error with code, message and exit code."""

    def __init__(self, code: str, message: str, exit_code: int = 1, details: Optional[dict] = None):
        self.code = code
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(message)


# ============ Configuration (exit 2) ============

class ConfigError(LtcPruneError):
    """Configuration file or field is invalid."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(
            code="CONFIG_ERROR",
            message=message,
            exit_code=2,
            details={"field": field} if field else {},
        )


# ============ Data (exit 3) ============

class DataError(LtcPruneError):
    """Dataset content or shape is unusable."""

    def __init__(self, message: str, code: str = "DATA_ERROR", details: Optional[dict] = None):
        super().__init__(code=code, message=message, exit_code=3, details=details)


class IntegrationError(DataError):
    """An ODE integration step produced a non-finite state."""

    def __init__(self, t: float, message: Optional[str] = None, code: str = "INTEGRATION_FAILED"):
        super().__init__(
            message or f"Non-finite derivative during integration at t={t:.6g}",
            code=code,
            details={"t": t},
        )
        self.t = t


class VolumeDepletionError(IntegrationError):
    """Reactor volume reached zero."""

    def __init__(self, t: float, volume: float):
        super().__init__(
            t,
            f"Reactor volume depleted (V={volume:.6g}) at t={t:.6g}",
            code="VOLUME_DEPLETED",
        )


class PopulationError(IntegrationError):
    """A population became non-positive or non-finite."""

    def __init__(self, t: float, step: int, species: str):
        super().__init__(
            t,
            f"{species} population collapsed at step {step} (t={t:.6g})",
            code="POPULATION_COLLAPSE",
        )
        self.details["step"] = step
        self.details["species"] = species


class TrainingError(LtcPruneError):
    """Training cannot start on the given dataset and channels."""

    def __init__(self, message: str):
        super().__init__(code="TRAINING_ERROR", message=message, exit_code=3)


class EvaluationError(LtcPruneError):
    """Loss, metric or causality window cannot be computed."""

    def __init__(self, message: str):
        super().__init__(code="EVALUATION_ERROR", message=message, exit_code=3)


class PruneError(LtcPruneError):
    """Pruning aborted; the partial trace travels in details."""

    def __init__(self, message: str, trace: Optional[dict] = None):
        super().__init__(
            code="PRUNE_ERROR",
            message=message,
            exit_code=3,
            details={"trace": trace} if trace else {},
        )


# ============ Model / data mismatch (exit 4) ============

class ChannelError(LtcPruneError):
    """Input channels do not match what the model consumes."""

    def __init__(self, message: str, names: Optional[list[str]] = None):
        super().__init__(
            code="CHANNEL_ERROR",
            message=message,
            exit_code=4,
            details={"channels": names} if names else {},
        )


class ModelError(LtcPruneError):
    """Model diverged or a model file is unusable."""

    def __init__(self, message: str, neuron: Optional[int] = None):
        super().__init__(
            code="MODEL_ERROR",
            message=message,
            exit_code=4,
            details={"neuron": neuron} if neuron is not None else {},
        )


class DivergenceError(ModelError):
    """Hidden state or gradient became non-finite."""

    def __init__(self, neuron: int, where: str = "hidden state"):
        super().__init__(f"Non-finite {where} at neuron {neuron}", neuron=neuron)
