"""Certified solution of B_n1 + B_n2 = 2^a1 + 2^a2 + 2^a3 over balancing numbers."""

__version__ = "0.1.0"
