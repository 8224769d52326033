"""Collective fund test suite."""
