"""OdeInstance JSON files."""
