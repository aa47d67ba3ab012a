"""Skew power series rings over filtered rings, truncated and verified."""
