"""Fading channel realizations and order-statistic distributions."""
