"""Exact dimer combinatorics and arctic curves for slanted T-system initial data."""

__version__ = "0.1.0"
