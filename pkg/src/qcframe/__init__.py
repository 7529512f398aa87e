"""Exact verification engine for the canonical coframe geometry of
quaternionic contact structures."""

__version__ = "0.1.0"
