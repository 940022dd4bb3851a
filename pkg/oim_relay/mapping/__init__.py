"""Adaptive mapping-scheme selection."""
