"""Maker-Breaker edge-coloring games: engine, strategies, exact solver, telemetry."""

__version__ = "0.1.0"
