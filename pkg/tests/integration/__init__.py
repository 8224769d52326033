"""Integration tests for collective fund experiments."""
