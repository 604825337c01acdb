"""
Atomic CSV/JSON writers for run artifacts.

Every artifact is written to a temporary sibling first and then renamed into
place, so a reader never observes a half-written file.
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd


def convert_numpy_types(obj: Any) -> Any:
    """Convert numpy types to Python native types for JSON serialization."""
    if isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, np.ndarray):
        return obj.tolist()
    elif isinstance(obj, dict):
        return {str(key): convert_numpy_types(value) for key, value in obj.items()}
    elif isinstance(obj, list | tuple):
        return [convert_numpy_types(item) for item in obj]
    else:
        return obj


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write text to path through a temp file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(
        prefix=f".{path.name}.", suffix=".tmp", dir=path.parent
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def write_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    """Write a DataFrame as CSV without the index."""
    text = frame.to_csv(index=False, lineterminator="\n")
    return atomic_write_text(path, text)


def to_json_text(payload: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(convert_numpy_types(payload), indent=2, sort_keys=True) + "\n"


def write_json(payload: Any, path: str | Path) -> Path:
    """Write a JSON document."""
    return atomic_write_text(path, to_json_text(payload))
