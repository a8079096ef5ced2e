# Initialize meadowcalc package
"""Exact meadow-based probability calculus."""

__version__ = "0.1.0"
