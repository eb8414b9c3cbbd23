"""Time budgets for search engines.

Every potentially long-running decision accepts an optional :class:`Deadline`.
Exceeding it raises :class:`BudgetExceeded`, which callers translate into an
explicit "unknown" verdict; a budget overrun is never reported as infeasible.
"""
from __future__ import annotations

import time


class BudgetExceeded(Exception):
    """Raised when a decision ran out of its time budget."""


class Deadline:
    """Wall-clock deadline checked periodically from search inner loops."""

    __slots__ = ("expires_at",)

    def __init__(self, seconds: float | None):
        self.expires_at = None if seconds is None else time.monotonic() + seconds

    def check(self) -> None:
        if self.expires_at is not None and time.monotonic() > self.expires_at:
            raise BudgetExceeded(f"time budget exhausted (deadline {self.expires_at:.3f})")


class _Ticker:
    """Amortises deadline checks: consult the clock once per `stride` ticks."""

    __slots__ = ("deadline", "stride", "count")

    def __init__(self, deadline: Deadline | None, stride: int = 2048):
        self.deadline = deadline
        self.stride = stride
        self.count = 0

    def tick(self) -> None:
        if self.deadline is None:
            return
        self.count += 1
        if self.count >= self.stride:
            self.count = 0
            self.deadline.check()
