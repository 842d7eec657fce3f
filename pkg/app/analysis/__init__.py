"""Bounded state-space exploration and the analyses built on it."""
