"""Per-invocation run state: artifacts written, warnings raised, manifest."""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .schemas import RunConfig, RunManifest
from .utils import write_json

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def config_run_id(command: str, testbed: Optional[str], config: dict[str, Any]) -> str:
    """Stable id from command, testbed and config snapshot."""
    payload = json.dumps({"command": command, "testbed": testbed, "config": config}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


@dataclass
class ArtifactEntry:
    """A single written artifact."""
    key: str
    path: Path


@dataclass
class RunState:
    """Mutable state of one ltc-prune command."""

    command: str
    out_dir: Path
    run_config: RunConfig = field(default_factory=RunConfig)
    testbed: Optional[str] = None
    started_at: str = field(default_factory=_now)

    artifacts: list[ArtifactEntry] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def record(self, key: str, path: Path) -> Path:
        """Add an artifact to the manifest."""
        self.artifacts.append(ArtifactEntry(key=key, path=Path(path)))
        logger.debug(f"Artifact {key}: {path}")
        return Path(path)

    def warn(self, message: str) -> None:
        logger.warning(message)
        self.warnings.append(message)

    @property
    def config_snapshot(self) -> dict[str, Any]:
        return self.run_config.model_dump(mode="json")

    @property
    def run_id(self) -> str:
        return config_run_id(self.command, self.testbed, self.config_snapshot)

    def relative(self, path: Path) -> str:
        try:
            return path.resolve().relative_to(self.out_dir.resolve()).as_posix()
        except ValueError:
            return str(path)

    def manifest(self) -> RunManifest:
        return RunManifest(
            run_id=self.run_id,
            command=self.command,
            testbed=self.testbed,
            tool_version=__version__,
            started_at=self.started_at,
            finished_at=_now(),
            config=self.config_snapshot,
            artifacts={a.key: self.relative(a.path) for a in self.artifacts},
            warnings=list(self.warnings),
            warning_count=len(self.warnings),
        )

    def missing_artifacts(self) -> list[str]:
        return [a.key for a in self.artifacts if not a.path.exists()]

    def write_manifest(self, name: str = MANIFEST_NAME) -> Path:
        missing = self.missing_artifacts()
        if missing:
            self.warn(f"Artifacts listed but not on disk: {missing}")
        path = self.out_dir / name
        write_json(path, self.manifest())
        logger.info(f"Manifest written: {path}")
        return path
