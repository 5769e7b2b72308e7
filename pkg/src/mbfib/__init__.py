"""Finite models of scaled, marked-scaled and marked-biscaled simplicial sets."""

__version__ = "0.1.0"
