"""The shipped ODE examples with their expected orders and narratives."""
