"""Geometric models of closed immersed-boundary structures.

Three representations of near-circular/spherical elastic objects --
piecewise linear, Fourier (trigonometric / spherical harmonic), and
radial basis function -- together with normal-vector and elastic-force
computation and a reproducible experiment harness for convergence,
shape-parameter, and timing studies.
"""

__version__ = "0.1.0"
