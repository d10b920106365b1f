"""Run configuration, resource caps and the error types shared by all modules."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

DEFAULT_PRECISION_BITS = 256
ENV_PREFIX = "PARTASYM_"


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class ResourceLimitError(RuntimeError):
    """A configured cap would be exceeded."""

    def __init__(self, cap_name: str, cap: int, requested: int):
        self.cap_name = cap_name
        self.cap = cap
        self.requested = requested
        super().__init__(f"{cap_name}={cap} exceeded (requested {requested})")


@dataclass
class Limits:
    exact_cap: int = 10**5
    enum_cap: int = 80
    subset_cap: int = 20
    moment_cap: int = 22
    digit_budget: int = 10**6


# Mutated in place by the CLI and by tests; every module reads caps from here.
LIMITS = Limits()


def check_cap(name: str, requested: int) -> None:
    cap = getattr(LIMITS, name)
    if requested > cap:
        raise ResourceLimitError(name, cap, requested)


@dataclass
class RunConfig:
    precision_bits: int = DEFAULT_PRECISION_BITS
    exact_cap: int = 10**5
    format: str = "csv"
    seed: int = 0
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path: str | os.PathLike | None = None, env=None) -> "RunConfig":
        """Defaults, then the JSON config file, then environment overrides."""
        env = os.environ if env is None else env
        cfg = cls()
        if path is not None:
            data = json.loads(Path(path).read_text())
            known = {f.name for f in fields(cls)}
            for key, value in data.items():
                if key in known:
                    setattr(cfg, key, value)
                else:
                    cfg.extra[key] = value
        for name in ("precision_bits", "exact_cap", "seed", "jobs"):
            raw = env.get(ENV_PREFIX + name.upper())
            if raw is not None:
                setattr(cfg, name, int(raw))
        raw = env.get(ENV_PREFIX + "FORMAT")
        if raw is not None:
            cfg.format = raw
        return cfg

    def apply(self) -> None:
        LIMITS.exact_cap = self.exact_cap

    def to_dict(self) -> dict:
        return asdict(self)
