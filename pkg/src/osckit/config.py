"""Run configuration, loadable from a JSON file."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace

CONFIG_ENV = "OSCKIT_CONFIG"
FORMATS = ("json", "csv", "text")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    precision_bits: int = 113
    N: int = 24
    residual_tol: float = 1e-25
    quad_nodes: int = 4096
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.precision_bits < 53:
            raise ConfigError("precision_bits must be at least 53")
        if self.N < 1:
            raise ConfigError("N must be positive")
        if not self.residual_tol > 0:
            raise ConfigError("residual_tol must be positive")
        if self.quad_nodes < 8:
            raise ConfigError("quad_nodes must be at least 8")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}")

    def updated(self, **changes) -> "Config":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_json(self) -> dict:
        return asdict(self)


def load_config(path: str | None = None) -> Config:
    """Read a JSON config; falls back to $OSCKIT_CONFIG, then to defaults."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return Config()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    known = {f.name for f in fields(Config)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return Config(**data)
