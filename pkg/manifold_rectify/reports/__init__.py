"""Benchmark harness and theory-verification experiments."""
