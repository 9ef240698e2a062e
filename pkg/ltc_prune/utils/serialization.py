"""Reading and writing datasets, models, configs and reports."""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..config import settings
from ..errors import ConfigError, DataError, ModelError
from ..ltc import TAU_MIN, LtcParameters, ObserverModel
from ..schemas import (
    CausalityReport,
    DatasetMetadata,
    ModelFile,
    RunConfig,
    RunManifest,
    TrainReport,
)
from ..testbeds import Channel, TimeSeriesDataset

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


# ============ Generic ============

def write_json(path: PathLike, obj: Union[BaseModel, dict[str, Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(obj, BaseModel):
        text = obj.model_dump_json(indent=2)
    else:
        text = json.dumps(obj, indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path


def write_csv(path: PathLike, header: Sequence[str], columns: Sequence[Sequence[Any]]) -> Path:
    """Numeric columns, written with the round-trip float format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if columns and len(columns[0]):
        matrix = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    else:
        matrix = np.empty((0, len(header)))
    np.savetxt(path, matrix, delimiter=",", header=",".join(header), comments="", fmt=settings.float_format)
    logger.debug(f"Wrote {path}")
    return path


def read_csv(path: PathLike) -> tuple[list[str], np.ndarray]:
    """Header and (rows, columns) matrix of a numeric CSV; zero rows gives an empty matrix."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"File not found: {path}", code="MISSING_FILE", details={"path": str(path)})
    with path.open(encoding="utf-8") as f:
        header = f.readline().strip().split(",")
        body = f.read()
    if not header or header == [""]:
        raise DataError(f"CSV has no header: {path}", details={"path": str(path)})
    if not body.strip():
        return header, np.empty((0, len(header)))
    try:
        matrix = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as e:
        raise DataError(f"Corrupt CSV {path}: {e}", details={"path": str(path)}) from e
    if matrix.shape[1] != len(header):
        raise DataError(
            f"{path} has {matrix.shape[1]} columns but {len(header)} header names",
            code="SHAPE_ERROR",
            details={"path": str(path)},
        )
    return header, matrix


def _load_json(path: Path, error: type) -> Any:
    if not path.is_file():
        if error is ConfigError:
            raise ConfigError(f"File not found: {path}")
        raise error(f"File not found: {path}", code="MISSING_FILE", details={"path": str(path)})
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        if error is ConfigError:
            raise ConfigError(f"Invalid JSON in {path}: {e}")
        raise error(f"Invalid JSON in {path}: {e}", details={"path": str(path)}) from e


# ============ Dataset ============

def metadata_path(csv_path: PathLike) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(f"{csv_path.stem}.meta.json")


def save_dataset(dataset: TimeSeriesDataset, csv_path: PathLike) -> tuple[Path, Path]:
    """
    CSV with columns t, channels..., target plus a metadata JSON holding mu, sigma and split.

    Values are the standardized ones; raw values are mu + sigma * z.
    """
    header = ["t", *dataset.channel_names, dataset.target.name]
    columns = [dataset.t, *(c.values for c in dataset.channels), dataset.target.values]
    csv_file = write_csv(csv_path, header, columns)

    meta = DatasetMetadata(
        testbed=dataset.testbed,
        n_samples=len(dataset),
        channels=[c.meta for c in dataset.channels],
        target=dataset.target.meta,
        split=dataset.split,
    )
    meta_file = write_json(metadata_path(csv_path), meta)
    return csv_file, meta_file


def load_dataset(csv_path: PathLike) -> TimeSeriesDataset:
    csv_path = Path(csv_path)
    header, matrix = read_csv(csv_path)
    raw_meta = _load_json(metadata_path(csv_path), DataError)
    try:
        meta = DatasetMetadata.model_validate(raw_meta)
    except ValidationError as e:
        raise DataError(f"Invalid dataset metadata for {csv_path}: {e}", details={"path": str(csv_path)}) from e

    expected = ["t", *(c.name for c in meta.channels), meta.target.name]
    if header != expected:
        raise DataError(
            f"CSV header {header} does not match metadata {expected}",
            code="SHAPE_ERROR",
            details={"path": str(csv_path)},
        )
    if matrix.shape[0] != meta.n_samples:
        raise DataError(
            f"{csv_path} has {matrix.shape[0]} rows, metadata says {meta.n_samples}",
            code="SHAPE_ERROR",
            details={"path": str(csv_path)},
        )

    channels = tuple(Channel(m, matrix[:, i + 1].copy()) for i, m in enumerate(meta.channels))
    target = Channel(meta.target, matrix[:, -1].copy())
    return TimeSeriesDataset(
        t=matrix[:, 0].copy(), channels=channels, target=target, split=meta.split, testbed=meta.testbed
    )


# ============ Model ============

def model_to_file(model: ObserverModel) -> ModelFile:
    p = model.params
    return ModelFile(
        hidden_size=model.hidden_size,
        dt=model.dt,
        tau_min=TAU_MIN,
        channel_names=list(model.channel_names),
        seed=model.seed,
        training_meta=model.training_meta,
        tau_raw=p.tau_raw.tolist(),
        b=p.b.tolist(),
        w_rec=p.w_rec.tolist(),
        w_in=p.w_in.tolist(),
        readout_w=p.readout_w.tolist(),
        readout_b=float(p.readout_b),
    )


def save_model(model: ObserverModel, path: PathLike) -> Path:
    return write_json(path, model_to_file(model))


def load_model(path: PathLike) -> ObserverModel:
    path = Path(path)
    raw = _load_json(path, DataError)
    try:
        data = ModelFile.model_validate(raw)
    except ValidationError as e:
        raise ModelError(f"Invalid model file {path}: {e}") from e
    if data.tau_min != TAU_MIN:
        raise ModelError(f"Model file {path} uses tau_min={data.tau_min}, this build uses {TAU_MIN}")

    params = LtcParameters.from_arrays(
        {
            "tau_raw": data.tau_raw,
            "b": data.b,
            "w_rec": data.w_rec,
            "w_in": np.reshape(data.w_in, (data.hidden_size, -1)),
            "readout_w": data.readout_w,
            "readout_b": data.readout_b,
        }
    )
    if params.hidden_size != data.hidden_size:
        raise ModelError(f"Model file {path} declares hidden_size {data.hidden_size}, arrays have {params.hidden_size}")
    return ObserverModel(
        params=params,
        channel_names=tuple(data.channel_names),
        dt=data.dt,
        seed=data.seed,
        training_meta=data.training_meta,
    )


# ============ Config ============

def _config_error(e: ValidationError, source: Path) -> ConfigError:
    first = e.errors()[0]
    field = ".".join(str(part) for part in first["loc"])
    return ConfigError(f"{source}: {field}: {first['msg']}", field=field)


def load_run_config(path: Optional[PathLike] = None) -> RunConfig:
    """
    RunConfig from a TOML file, or from the ``config`` snapshot of a run manifest JSON.
    No path gives the defaults.
    """
    if path is None:
        return RunConfig()
    path = Path(path)

    if path.suffix == ".json":
        raw = _load_json(path, ConfigError)
        try:
            snapshot = RunManifest.model_validate(raw).config
        except ValidationError as e:
            raise _config_error(e, path) from e
    else:
        if not path.is_file():
            raise ConfigError(f"File not found: {path}")
        try:
            snapshot = tomllib.loads(path.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"Invalid TOML in {path}: {e}") from e

    try:
        return RunConfig.model_validate(snapshot)
    except ValidationError as e:
        raise _config_error(e, path) from e


# ============ Reports ============

def write_causality_csv(report: CausalityReport, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["name,score,rank"]
    lines += [f"{e.name},{settings.float_format % e.score},{e.rank}" for e in report.entries]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_causality_csv(path: PathLike) -> list[tuple[str, float, int]]:
    """(name, score, rank) rows in file order."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"File not found: {path}", code="MISSING_FILE", details={"path": str(path)})
    rows = []
    for line in path.read_text(encoding="utf-8").splitlines()[1:]:
        if line.strip():
            name, score, rank = line.split(",")
            rows.append((name, float(score), int(rank)))
    return rows


def write_loss_csv(report: TrainReport, path: PathLike) -> Path:
    epochs = np.arange(report.epochs_run)
    return write_csv(path, ["epoch", "train_loss", "val_loss"], [epochs, report.train_loss, report.val_loss])


def write_prediction_csv(t: np.ndarray, truth: np.ndarray, prediction: np.ndarray, path: PathLike) -> Path:
    return write_csv(path, ["t", "truth", "prediction"], [t, truth, prediction])
