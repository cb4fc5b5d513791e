"""Exact normal forms for holomorphic bundles on the total space of O(-k)."""

__version__ = "0.1.0"
