"""Configuration helpers and constants."""
