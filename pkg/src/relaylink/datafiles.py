"""Resolution of data files: explicit path, then RELAYLINK_DATA_DIR, then packaged."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from relaylink.errors import DataCoverageError

DATA_DIR_ENV = "RELAYLINK_DATA_DIR"


def resolve(filename: str, explicit: str | Path | None = None) -> Path:
    """Locate a data file, preferring an explicit path, then the env dir.

    Falls back to the copy shipped inside the package; raises
    DataCoverageError when the file exists nowhere.
    """
    if explicit is not None:
        path = Path(explicit)
        if not path.exists():
            raise DataCoverageError(f"data file not found: {path}")
        return path
    env_dir = os.environ.get(DATA_DIR_ENV)
    if env_dir:
        candidate = Path(env_dir) / filename
        if candidate.exists():
            return candidate
    packaged = resources.files("relaylink") / "data" / filename
    if packaged.is_file():
        return Path(str(packaged))
    raise DataCoverageError(
        f"data file {filename!r} not found (set {DATA_DIR_ENV} or pass a path)"
    )
