import csv
import json
import math
import os
from typing import Any, Iterable, Sequence

from selfsim.settings import settings


def output_dir(override=None) -> str:
    path = override or settings.OUTPUT_DIR
    os.makedirs(path, exist_ok=True)
    return path


def write_csv(filepath: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    os.makedirs(os.path.dirname(filepath) or ".", exist_ok=True)
    with open(filepath, "w+", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row has {len(row)} columns, header has {len(header)}")
            writer.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return filepath


def sanitize(value: Any) -> Any:
    """Replaces NaN and infinities with {"value": null, "reason": ...}."""
    if isinstance(value, float):
        if math.isnan(value):
            return {"value": None, "reason": "nan"}
        if math.isinf(value):
            return {"value": None, "reason": "+inf" if value > 0 else "-inf"}
        return value
    if isinstance(value, dict):
        return {k: sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(v) for v in value]
    return value


def to_json(data: Any) -> str:
    return json.dumps(sanitize(data), indent=4, ensure_ascii=False, allow_nan=False)


def write_json(filepath: str, data: Any) -> str:
    os.makedirs(os.path.dirname(filepath) or ".", exist_ok=True)
    with open(filepath, "w+", encoding="utf-8") as f:
        f.write(to_json(data))
    return filepath
