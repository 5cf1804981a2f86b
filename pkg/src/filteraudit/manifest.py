"""Run manifests: enough provenance to reproduce any output."""

from __future__ import annotations

import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Optional

from . import __version__
from .io import file_digest


@dataclass
class RunManifest:
    command: str
    config_digest: str
    input_digests: Dict[str, str] = field(default_factory=dict)
    seed: Optional[int] = None
    version: str = __version__
    wall_time_s: float = 0.0


def build_manifest(
    argv=None,
    config_digest: str = "",
    inputs: Dict[str, str] = None,
    seed: Optional[int] = None,
) -> RunManifest:
    argv = sys.argv if argv is None else argv
    digests = {
        name: file_digest(path) for name, path in sorted((inputs or {}).items())
    }
    return RunManifest(
        command=" ".join(argv),
        config_digest=config_digest,
        input_digests=digests,
        seed=seed,
    )


def manifest_path(output) -> Path:
    """manifest.json inside a directory, <name>.manifest.json beside a file."""
    output = Path(output)
    if output.is_dir():
        return output / "manifest.json"
    return output.with_name(output.name + ".manifest.json")


def write_manifest(output, manifest: RunManifest) -> Path:
    path = manifest_path(output)
    path.write_text(json.dumps(asdict(manifest), indent=2) + "\n", "utf-8")
    return path


def read_manifest(output) -> RunManifest:
    data = json.loads(manifest_path(output).read_text("utf-8"))
    return RunManifest(**data)
