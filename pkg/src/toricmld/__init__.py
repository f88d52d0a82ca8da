"""Minimal log discrepancies of toric log pairs, computed exactly."""

__version__ = "0.1.0"
