"""Finite models of compactly generated t-structures on derived categories of graded monomial rings."""
__version__ = "0.1.0"
