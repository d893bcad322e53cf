"""Run configuration shared by the command line and the experiment scripts."""

import os
from dataclasses import asdict, dataclass, field

from .balls import DEFAULT_CAP

FORMATS = ("json", "csv", "text")


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    cap: int = DEFAULT_CAP
    budget: int = 3
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    output: str = None
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.cap <= 0:
            raise ValueError("cap must be positive")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if self.threads <= 0:
            raise ValueError("threads must be positive")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {', '.join(FORMATS)}")

    def to_json(self):
        return asdict(self)
