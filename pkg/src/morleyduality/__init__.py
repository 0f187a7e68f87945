"""Exact verification of the Morley-form duality for weighted homogeneous systems."""

__version__ = "0.1.0"
