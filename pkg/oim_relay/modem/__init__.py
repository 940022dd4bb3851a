"""Dual-mode encoding, hop transmission and ML detection."""
