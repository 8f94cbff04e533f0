"""Core package: operator, solver and the numerical workflows."""
