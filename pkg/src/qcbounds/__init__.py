"""
Dirichlet Eigenvalue Bounds for Divergence-Form Elliptic Operators

Quasiconformal coefficient constructions, Sobolev-Poincare constants and a
P1 finite-element verifier for the first eigenvalue of -div(A grad f).
"""

__version__ = "1.0.0"
