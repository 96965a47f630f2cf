"""
CSV and JSON emission.

CSVs are written with pandas using a fixed float format so that identical
inputs produce byte-identical files. JSON artifacts are written atomically
(tmp file, then replace) and carry a schema version.
"""

import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence

import pandas as pd

SCHEMA_VERSION = 1
FLOAT_FORMAT = "%.12g"


def records_frame(rows: Iterable[Mapping[str, Any]], columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    frame = pd.DataFrame(list(rows))
    if columns is not None:
        frame = frame.reindex(columns=list(columns))
    return frame


def write_csv(rows: Iterable[Mapping[str, Any]], path: Path, columns: Optional[Sequence[str]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    records_frame(rows, columns).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, Mapping):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def write_json(payload: Mapping[str, Any], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    document = {"schema_version": SCHEMA_VERSION, **_json_safe(dict(payload))}
    with open(tmp, "w") as f:
        json.dump(document, f, indent=2)
    tmp.replace(path)
    return path
