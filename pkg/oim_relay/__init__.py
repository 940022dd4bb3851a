"""Adaptive OFDM index modulation over two-hop decode-and-forward relays."""

__version__ = "0.1.0"
