"""Exact verification of integrality properties of mirror maps."""

__version__ = "0.1.0"
