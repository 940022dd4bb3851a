"""Scenario configuration, pattern combinatorics and shared domain types."""
