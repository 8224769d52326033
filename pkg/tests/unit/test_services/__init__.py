"""Tests for experiment services."""
