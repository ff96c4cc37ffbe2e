"""Growth functionals of entire functions and the order estimators built on them."""
