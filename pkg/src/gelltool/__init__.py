"""Exact geometric Elliott invariants and gap labels for Z^d-odometer crossed products."""

__version__ = "0.1.0"
