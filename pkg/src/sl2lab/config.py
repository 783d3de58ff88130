"""Runtime configuration: size caps, search budget, output format, workers.

`SL2LAB_CONFIG` may point at a JSON file providing defaults; command-line
flags override it.  Caps are hard: exceeding one yields a structured refusal,
never a partial silent result.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields

CONFIG_ENV_VAR = "SL2LAB_CONFIG"


@dataclass
class Config:
    ring_order_cap: int = 64
    group_order_cap: int = 200_000
    delta_budget: int = 50_000
    output_format: str = "text"
    parallelism: int = 1

    def __post_init__(self):
        for name in ("ring_order_cap", "group_order_cap", "delta_budget",
                     "parallelism"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output_format not in ("json", "tsv", "text"):
            raise ValueError(f"unknown output format {self.output_format!r}")


def load_config(path: str | None = None) -> Config:
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return Config()
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    known = {f.name for f in fields(Config)}
    return Config(**{k: v for k, v in data.items() if k in known})
