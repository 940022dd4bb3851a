"""Closed-form outage, capacity, SER and rate evaluation."""
