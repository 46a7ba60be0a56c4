"""Exact tensor rank, border rank and fast matrix multiplication toolkit."""

__version__ = "0.1.0"
