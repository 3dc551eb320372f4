"""Sliding-window request rate limiter.

Keeps a log of recent grant timestamps; a request is granted only if no more
than ``capacity`` grants would fall inside any trailing ``window`` interval.
A timestamp counts toward the window at instant ``t`` while ``ts > t - window``.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass

DEFAULT_CAPACITY = 100
DEFAULT_WINDOW_SECONDS = 300.0


@dataclass
class SlotDecision:
    granted: bool
    wait_seconds: float = 0.0


class SlidingWindowLimiter:
    """Thread-safe sliding-window log limiter.

    Args:
        capacity: maximum grants per window.
        window: window length in seconds.
    """

    def __init__(self, capacity: int = DEFAULT_CAPACITY, window: float = DEFAULT_WINDOW_SECONDS):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        if window <= 0:
            raise ValueError("window must be positive")
        self.capacity = capacity
        self.window = window
        self._timestamps: deque[float] = deque()
        self._lock = threading.Lock()

    def acquire_slot(self, now: float) -> SlotDecision:
        """Grant a slot at time ``now`` or report the minimal wait until one frees."""
        with self._lock:
            self._evict(now)
            if len(self._timestamps) < self.capacity:
                self._timestamps.append(now)
                return SlotDecision(granted=True)
            # Oldest in-window grant leaves the window at oldest + window.
            wait = self._timestamps[0] + self.window - now
            return SlotDecision(granted=False, wait_seconds=max(wait, 0.0))

    def in_window(self, now: float) -> int:
        """Number of grants currently inside the trailing window."""
        with self._lock:
            self._evict(now)
            return len(self._timestamps)

    def tighten(self, now: float, hold_seconds: float) -> None:
        """Block new grants for ``hold_seconds`` by saturating the window.

        Used when the upstream service answers 429 with a retry-after hint:
        the local log is padded so the next slot frees no earlier than
        ``now + hold_seconds``.
        """
        with self._lock:
            self._evict(now)
            anchor = now + hold_seconds - self.window
            self._timestamps.clear()
            self._timestamps.extend([anchor] * self.capacity)

    def _evict(self, now: float) -> None:
        cutoff = now - self.window
        while self._timestamps and self._timestamps[0] <= cutoff:
            self._timestamps.popleft()
