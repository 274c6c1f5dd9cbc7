"""Service configuration: one JSON file plus command-line overrides.

The data directory holds the task queue (``items.csv``) and the durable
event log (``events.jsonl``); everything the service knows is rebuilt
from those two files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path


@dataclass(frozen=True)
class ServiceConfig:
    port: int = 8765
    data_dir: str = "annotation-data"
    probe_rate: float = 0.1
    shared_pool_size: int = 0
    rater_count: int = 5

    def __post_init__(self):
        problems = []
        if not (0 < self.port < 65536):
            problems.append(f"port must be in 1..65535, got {self.port}")
        if not (0.0 <= self.probe_rate <= 1.0):
            problems.append(f"probe_rate must be in [0, 1], got {self.probe_rate}")
        if self.shared_pool_size < 0:
            problems.append(f"shared_pool_size must be >= 0, got {self.shared_pool_size}")
        if self.rater_count < 1:
            problems.append(f"rater_count must be >= 1, got {self.rater_count}")
        if problems:
            raise ValueError("bad service configuration: " + "; ".join(problems))

    @property
    def items_path(self) -> Path:
        return Path(self.data_dir) / "items.csv"

    @property
    def log_path(self) -> Path:
        return Path(self.data_dir) / "events.jsonl"


_KEYS = ("port", "data_dir", "probe_rate", "shared_pool_size", "rater_count")


def load_config(path: str | Path | None = None, **overrides) -> ServiceConfig:
    """Read the config file (if given) and apply non-None overrides."""
    values = {}
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = sorted(set(raw) - set(_KEYS))
        if unknown:
            raise ValueError(f"unknown config key(s) in {path}: {', '.join(unknown)}")
        values.update(raw)
    config = ServiceConfig(**values)
    cleaned = {k: v for k, v in overrides.items() if v is not None}
    unknown = sorted(set(cleaned) - set(_KEYS))
    if unknown:
        raise ValueError(f"unknown config override(s): {', '.join(unknown)}")
    if cleaned:
        config = replace(config, **cleaned)
    return config
