"""Simulation laboratory for functions approximable from above and the
distance functions of stage-wise built spoke graphs."""

__version__ = "0.1.0"
