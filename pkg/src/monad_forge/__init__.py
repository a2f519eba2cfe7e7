"""Exact workbench for valuation/nondeterminism monads on finite posets."""

__version__ = "0.1.0"
