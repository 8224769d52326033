"""Optimal consumption and investment for individual and collective pension funds."""

__version__ = "0.1.0"
