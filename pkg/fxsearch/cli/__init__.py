"""Command-line interface for fxsearch."""
