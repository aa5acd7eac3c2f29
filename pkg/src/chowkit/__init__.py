"""Exact computations with Chow forms, Chow weights, Hilbert weights and heights."""

__version__ = "0.1.0"
