"""Exact verification of the four-point semidefinite bound for equiangular lines."""

__version__ = "0.1.0"
