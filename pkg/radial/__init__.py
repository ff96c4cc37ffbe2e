"""Finite unions of closed radius intervals and their logarithmic measure."""
