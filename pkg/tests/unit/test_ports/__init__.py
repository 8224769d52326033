"""Tests for port protocols."""
