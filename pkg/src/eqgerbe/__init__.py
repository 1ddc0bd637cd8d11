"""Numerical and symbolic checks for the equivariant basic gerbe on U(n)."""

__version__ = "0.1.0"
