"""Base command functionality for LTC Prune."""

import argparse
import logging
from functools import wraps
from pathlib import Path
from typing import Callable, Optional

from pydantic import ValidationError
from rich.console import Console

from ..config import settings
from ..errors import ConfigError, LtcPruneError
from ..schemas import RunConfig
from ..state import RunState
from ..utils import load_run_config

logger = logging.getLogger(__name__)

console = Console()

Command = Callable[[argparse.Namespace], int]


def exit_on_error(func: Command) -> Command:
    """Decorator turning errors into exit codes: 2 config, 3 data, 4 model mismatch, 1 otherwise."""
    @wraps(func)
    def wrapper(args: argparse.Namespace) -> int:
        try:
            return func(args)
        except LtcPruneError as e:
            logger.error(f"{e.code}: {e.message}")
            console.print(f"[bold red]❌ {e.message}[/bold red]")
            return e.exit_code
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first["loc"])
            logger.error(f"CONFIG_ERROR: {field}: {first['msg']}")
            console.print(f"[bold red]❌ Invalid {field}: {first['msg']}[/bold red]")
            return 2
        except Exception as e:
            logger.exception(f"Unexpected error in {func.__name__}: {e}")
            return 1

    return wrapper


def output_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out) if getattr(args, "out", None) else settings.output_root
    if out.exists() and not out.is_dir():
        raise ConfigError(f"Output path is not a directory: {out}", field="out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def apply_overrides(run_config: RunConfig, args: argparse.Namespace) -> RunConfig:
    """Fold --seed, --segment and --max-iters into the config tables they override."""
    updates: dict = {}
    seed: Optional[int] = getattr(args, "seed", None)
    if seed is not None:
        for table in ("mechanical", "cstr", "predprey", "train"):
            updates[table] = getattr(run_config, table).model_copy(update={"seed": seed})
    segment = getattr(args, "segment", None)
    if segment is not None:
        updates["causality"] = run_config.causality.model_copy(update={"segment": segment})
    max_iters = getattr(args, "max_iters", None)
    if max_iters is not None:
        if max_iters < 1:
            raise ConfigError("--max-iters must be at least 1", field="prune.max_iters")
        updates["prune"] = run_config.prune.model_copy(update={"max_iters": max_iters})
    if not updates:
        return run_config
    # Revalidate so overridden values pass the same checks as file values
    merged = run_config.model_dump()
    merged.update({k: v.model_dump() for k, v in updates.items()})
    return RunConfig.model_validate(merged)


def start_run(command: str, args: argparse.Namespace, testbed: Optional[str] = None) -> RunState:
    """Load config, apply CLI overrides and open a RunState in the output directory."""
    run_config = apply_overrides(load_run_config(getattr(args, "config", None)), args)
    return RunState(command=command, out_dir=output_dir(args), run_config=run_config, testbed=testbed)


def parse_channels(raw: Optional[str]) -> Optional[list[str]]:
    if not raw:
        return None
    names = [name.strip() for name in raw.split(",") if name.strip()]
    if not names:
        raise ConfigError("--channels is empty", field="channels")
    return names
