"""Exact F2 computations with restricted vector spaces, the free unstable algebra functor and Dyer–Lashof bases."""

__version__ = "0.1.0"
