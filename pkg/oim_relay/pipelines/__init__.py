"""Pipelines: scenario parsing and experiment orchestration."""
