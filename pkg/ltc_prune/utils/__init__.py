"""Utility modules for LTC Prune."""

from .charts import bar_chart, line_chart
from .serialization import (
    load_dataset,
    load_model,
    load_run_config,
    read_causality_csv,
    read_csv,
    save_dataset,
    save_model,
    write_causality_csv,
    write_csv,
    write_json,
    write_loss_csv,
    write_prediction_csv,
)
from .tables import roman, summary_table

__all__ = [
    # Serialization
    "write_json",
    "write_csv",
    "read_csv",
    "save_dataset",
    "load_dataset",
    "save_model",
    "load_model",
    "load_run_config",
    "write_causality_csv",
    "read_causality_csv",
    "write_loss_csv",
    "write_prediction_csv",
    # Charts
    "line_chart",
    "bar_chart",
    # Tables
    "summary_table",
    "roman",
]
