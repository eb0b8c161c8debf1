"""Horizon edge model, denoisers, and Monte Carlo risk laboratory."""

__version__ = "0.1.0"
