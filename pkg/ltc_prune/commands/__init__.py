"""Command modules for LTC Prune."""

from .analyze import analyze_command
from .base import apply_overrides, console, exit_on_error
from .evaluate import evaluate_command
from .generate import generate_command
from .prune import prune_command
from .report import render_charts, report_command
from .train import train_command

COMMANDS = {
    "generate": generate_command,
    "train": train_command,
    "analyze": analyze_command,
    "prune": prune_command,
    "evaluate": evaluate_command,
    "report": report_command,
}

__all__ = [
    # Pipeline
    "generate_command",
    "train_command",
    "analyze_command",
    "prune_command",
    "evaluate_command",
    # Reporting
    "report_command",
    "render_charts",
    # Shared
    "COMMANDS",
    "console",
    "exit_on_error",
    "apply_overrides",
]
