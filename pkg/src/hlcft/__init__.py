"""Exact finite-level arithmetic for class field theory of higher local fields
of characteristic p."""

__version__ = "0.1.0"
