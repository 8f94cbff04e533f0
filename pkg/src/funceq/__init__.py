"""funceq

Numerical workbench for the functional equation
f(x) = phi(x) f(phi1(x)) + (1 - phi(x)) f(phi2(x)) on [0, 1]: contraction
certificates, Picard iteration, quadratic approximation, an exactly solvable
family and a Monte-Carlo cross-check.
"""

__version__ = "0.1.0"

# Don't import main here to avoid circular imports
__all__ = ["__version__"]
