"""Logging setup and deterministic report output."""
