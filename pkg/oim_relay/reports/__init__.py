"""Report generation: CSV curves, run manifests, console tables."""
