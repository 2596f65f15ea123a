"""Errors and bookkeeping shared by the attacks."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field


class AttackFailure(Exception):
    """An attack gave up; ``stats`` carries whatever was measured."""

    def __init__(self, message: str, stats: "AttackStats | None" = None):
        super().__init__(message)
        self.stats = stats


class NotGRSError(AttackFailure):
    """The input code does not behave like a GRS code."""


class RateTooHighError(AttackFailure):
    """Filtration needs k <= n/2; run it on the dual instead."""


class UnsupportedParameters(AttackFailure):
    """Parameters outside every branch the attack can handle."""


@dataclass
class AttackStats:
    """Trial counters and wall-clock per phase, filled in as the attack runs."""

    phases: dict[str, float] = field(default_factory=dict)
    counters: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.phases[name] = self.phases.get(name, 0.0) + time.perf_counter() - t0

    def bump(self, name: str, by: int = 1) -> None:
        self.counters[name] = self.counters.get(name, 0) + by

    @property
    def total_seconds(self) -> float:
        return sum(self.phases.values())

    def to_json(self) -> dict:
        return {"phases": dict(self.phases), "counters": dict(self.counters), "notes": list(self.notes)}
