"""Shared helpers: seed derivation, confidence intervals, search budgets."""

from __future__ import annotations

import hashlib
import math


class StrategyError(ValueError):
    """A strategy was consulted in a position it cannot handle."""


class BudgetExceeded(RuntimeError):
    """A search exceeded its node budget; carries the count at abort time."""

    def __init__(self, nodes: int, what: str = "search") -> None:
        super().__init__(f"{what} exceeded budget after {nodes} nodes")
        self.nodes = nodes


def derive_seed(master: int, *parts: object) -> int:
    """Derive a stable 64-bit sub-seed from a master seed and a label path.

    Uses SHA-256 so results do not depend on the interpreter's hash
    randomization; the same (master, parts) always yields the same seed.
    """
    text = "|".join([str(master), *[str(p) for p in parts]])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError("successes out of range")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))
