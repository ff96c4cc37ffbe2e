"""Phase indicator of exp(P) and the two-sided bounds it governs."""
