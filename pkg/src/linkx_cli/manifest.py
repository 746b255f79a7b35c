"""Run manifests: everything needed to reproduce a CLI run."""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from linkx_cli.formatting import SCHEMA_VERSION

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"


@dataclass
class RunManifest:
    """Provenance of one invocation, written before any result file."""

    subcommand: str
    config: dict[str, Any]
    """Fully resolved configuration (file values plus flag overrides)."""

    seed: int
    dataset_dir: str | None = None
    dataset_checksum: str | None = None
    artifacts: dict[str, str] = field(default_factory=dict)
    """Artifact name -> path relative to the run directory."""

    tool_version: str = ""
    options: dict[str, Any] = field(default_factory=dict)
    """Subcommand options that are not part of the training config."""

    def write(self, directory: str | Path) -> Path:
        path = Path(directory) / MANIFEST_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {"schema_version": SCHEMA_VERSION, **asdict(self)}
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        logger.info(f"Wrote manifest {path}")
        return path

    @classmethod
    def read(cls, path: str | Path) -> "RunManifest":
        """Load a manifest file (or the manifest inside a run directory).

        Raises:
            FileNotFoundError: If no manifest exists at the path
            ValueError: If the file is not a valid manifest
        """
        path = Path(path)
        if path.is_dir():
            path = path / MANIFEST_FILE
        if not path.exists():
            raise FileNotFoundError(f"Manifest not found: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ValueError(f"Failed to parse manifest {path}: {e}") from e
        raw.pop("schema_version", None)
        try:
            return cls(**raw)
        except TypeError as e:
            raise ValueError(f"Invalid manifest {path}: {e}") from e
