"""Run configuration: a single flat record parsed from JSON, overridden by
CLI flags, persisted fully-resolved next to every run's outputs."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field


@dataclass
class RunConfig:
    model: str = "classical"          # classical | discrete-classical:EPS |
    #                                   fractional:ALPHA | fractional-raw:ALPHA |
    #                                   discrete-fractional:EPS,ALPHA
    L: float = 12.0
    n: int = 1025
    weight: str = "1,0"               # p,q[,s]
    params: list = field(default_factory=list)
    splitting: str = ""               # classical:M,R | fractional:ETA,LCUT,R
    gap_target: float = -0.5
    a_target: float = -0.5
    seed: int = 0
    n_paths: int = 100000
    t_end: float = 4.0
    dt: float = 0.05
    scheme: str = "ExactExpm"
    outdir: str = "out"

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        with open(path) as fh:
            data = json.load(fh)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def override(self, **kwargs) -> "RunConfig":
        """CLI-flag precedence: only non-None values replace file values."""
        updates = {k: v for k, v in kwargs.items() if v is not None}
        known = {f.name for f in dataclasses.fields(self)}
        unknown = set(updates) - known
        if unknown:
            raise ValueError(f"unknown config overrides: {sorted(unknown)}")
        return dataclasses.replace(self, **updates)

    def persist(self, outdir: str | None = None) -> str:
        out = outdir or self.outdir
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, "resolved_config.json")
        with open(path, "w") as fh:
            json.dump(dataclasses.asdict(self), fh, indent=2, sort_keys=True)
        return path
