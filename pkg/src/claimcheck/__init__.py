"""Fact-checking pipeline toolkit: claim ranking, evidence retrieval, and
veracity scoring with deterministic offline backends."""

__version__ = "0.1.0"
