"""Second-order linear ODE instances f'' + A f' + B f = H and their checks."""
