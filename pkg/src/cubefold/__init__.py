"""Pasting categories of cube complexes, cubical categories with
connections, folding operators, and the globular/cubical round-trip."""

__version__ = "0.1.0"
