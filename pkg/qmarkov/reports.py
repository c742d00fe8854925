"""CSV and JSON writers

Tables are written with ``DataFrame.to_csv`` without the index, so equal
tables give byte-identical files. JSON summaries carry the schema version
and a UTC timestamp, the only field that changes between equal runs.
"""
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
from pandas import DataFrame

from .constants import SCHEMA_VERSION

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _to_builtin(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_builtin(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, complex):
        return {"real": value.real, "imag": value.imag}
    return value


def write_csv(table: DataFrame, path: PathLike) -> Path:
    """Write a table as CSV with a header row

    :param table: the table
    :param path: target file, parent directories are created
    :return: path of the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False)
    logger.info("Wrote %s", path)
    return path


def summary_document(summary: Dict[str, Any]) -> Dict[str, Any]:
    """Summary with schema version and timestamp, converted to JSON types

    Non-finite floats become null.
    """
    document = {
        "schema_version": SCHEMA_VERSION,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    document.update(_to_builtin(summary))
    return document


def write_json(summary: Dict[str, Any], path: PathLike) -> Path:
    """Write a summary document as JSON

    :param summary: the summary
    :param path: target file, parent directories are created
    :return: path of the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(summary_document(summary), indent=2), encoding="utf-8")
    logger.info("Wrote %s", path)
    return path
