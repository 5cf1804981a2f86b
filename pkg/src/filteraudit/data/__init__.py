"""Packaged data files: lexicons, gazetteer, defaults, and the mini corpus."""

from importlib import resources
from pathlib import Path


def bundled_path(name: str) -> Path:
    """Filesystem path of a packaged data file, e.g. ``mini/mini.jsonl``."""
    path = Path(str(resources.files(__name__).joinpath(name)))
    if not path.exists():
        raise FileNotFoundError(f"no bundled data file named {name!r}")
    return path
