from typing import Dict, Optional

from pydantic import ValidationError

from selfsim.errors import ConfigError
from selfsim.schema.config import RunConfig


def parse_key_values(text: str) -> Dict[str, str]:
    """Flat key=value lines; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got '{line}'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", line=lineno)
        if key not in RunConfig.model_fields:
            raise ConfigError(f"Unknown key {key}", line=lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key}", line=lineno)
        values[key] = value
    return values


def load_run_config(path: Optional[str], overrides: Optional[Dict[str, object]] = None) -> RunConfig:
    """Reads a run config file and applies overrides on top; overrides win."""
    values: Dict[str, object] = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as f:
            values.update(parse_key_values(f.read()))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise ConfigError(f"invalid run config: {e}")
