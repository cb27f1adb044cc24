"""Tests for fxsearch."""
