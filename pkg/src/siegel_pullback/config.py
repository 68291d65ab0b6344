"""Run configurations for the experiment scripts.

Each config is a frozen dataclass; :func:`load_config` overrides defaults from a
JSON object with the same field names.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path
from typing import TypeVar

from .modular import SUPPORTED_WEIGHTS

T = TypeVar("T")


@dataclass(frozen=True)
class PullbackConfig:
    weights: tuple = tuple(k for k in SUPPORTED_WEIGHTS if k != 14)
    trunc: int = 8


@dataclass(frozen=True)
class ConjectureConfig:
    lam: int = 1
    k: int = 12
    s_grid: tuple = (0.5, 1.0, 1.5, 2.0, 2.5)


@dataclass(frozen=True)
class LValueConfig:
    weight: int = 12
    s: float = 10.0
    cutoffs: tuple = (1_000, 10_000, 100_000)


@dataclass(frozen=True)
class PeterssonConfig:
    weight: int = 12
    truncs: tuple = (10, 20, 40)
    tol: float = 1e-10
    gauss_nodes: int = 80
    y_max: float = 12.0


@dataclass(frozen=True)
class DoubleCosetConfig:
    weights: tuple = (12, 16, 18, 20, 22)
    ts: tuple = (2, 3, 4, 5, 7, 9, 25)


def load_config(cls: type[T], path: str | Path | None = None) -> T:
    """Defaults of ``cls``, overridden by the JSON file at ``path`` if given."""
    if path is None:
        return cls()
    data = json.loads(Path(path).read_text())
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ValueError(f"unknown config fields for {cls.__name__}: {sorted(unknown)}")
    return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in data.items()})
