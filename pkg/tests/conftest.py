"""Shared test configuration: deterministic hypothesis profile and helpers."""

from __future__ import annotations

import math
from pathlib import Path

from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

DATA_DIR = Path(__file__).parent / "data"


def within_ulps(a: float, b: float, ulps: int) -> bool:
    """True when a and b differ by at most `ulps` units of the larger value."""
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return a == b
    return abs(a - b) <= ulps * math.ulp(scale)
