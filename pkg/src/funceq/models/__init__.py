"""Models package: grid functions, equation specs and reports."""
