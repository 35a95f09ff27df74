"""Shared domain types for the frog-snake optimizer and its harness.

Solutions are binary feature masks held as 1-D numpy uint8 arrays with values
in {0, 1}. Masks are compared positionwise and keyed into caches by their raw
bytes, so two equal masks always hash to the same cache entry. Fitness values
are float64 throughout.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class ConfigError(ValueError):
    """Invalid parameter or run configuration."""


class DataError(ValueError):
    """Dataset ingestion or validation failure."""


class Group(enum.Enum):
    FROG = "frog"
    SNAKE = "snake"


def new_mask(bits) -> np.ndarray:
    """Build a validated mask from any 0/1 sequence."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("mask must be a non-empty 1-D sequence")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("mask elements must be 0 or 1")
    return arr


def mask_key(mask: np.ndarray) -> bytes:
    """Hashable cache key; equal masks yield equal keys."""
    return mask.tobytes()


def mask_string(mask: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in mask)


def parse_mask(text: str) -> np.ndarray:
    return new_mask([int(c) for c in text])


@dataclass
class Agent:
    """One search agent: a mask plus its current and previous fitness."""

    id: int
    solution: np.ndarray
    group: Group
    fitness: float | None = None
    prev_fitness: float | None = None


@dataclass
class PopulationState:
    """Full engine state between iterations.

    Invariants kept by the engine: frog_share + snake_share == 1 (within fp),
    len(agents) is constant, both groups are non-empty after every step, and
    global_best_fitness never increases.
    """

    agents: list[Agent]
    frog_share: float
    snake_share: float
    iteration: int
    global_best_mask: np.ndarray | None = None
    global_best_fitness: float | None = None
    next_agent_id: int = 0
    # diagnostics from the most recent step (predation outcomes)
    predation_plans: list = field(default_factory=list)

    def frogs(self) -> list[Agent]:
        return [a for a in self.agents if a.group is Group.FROG]

    def snakes(self) -> list[Agent]:
        return [a for a in self.agents if a.group is Group.SNAKE]


@dataclass(frozen=True)
class TraceRow:
    """Per-iteration diagnostics row, one per iteration including iteration 0."""

    iteration: int
    best_fitness: float
    frog_count: int
    snake_count: int
    predation_success: bool


@dataclass
class SearchOutcome:
    """What a single optimizer run produces before dataset-level bookkeeping."""

    best_mask: np.ndarray
    best_fitness: float
    trace: list[TraceRow]


@dataclass
class RunResult:
    """One seeded run of one algorithm on one dataset."""

    algorithm: str
    dataset: str
    seed: int
    best_fitness: float
    best_mask: np.ndarray
    test_accuracy: float
    selected_count: int
    wall_time_seconds: float
    trace: list[TraceRow]
