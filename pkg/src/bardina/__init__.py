"""Damped Euler-Bardina model on the 2D torus: solver, instability analysis,
attractor-dimension bounds, and the supporting spectral inequalities."""

__version__ = "0.1.0"
