"""Corpus runner and the worker pool it dispatches to."""
