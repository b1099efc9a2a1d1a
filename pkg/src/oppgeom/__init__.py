"""Computational engine for automorphisms of small spherical buildings over GF(2)."""

__version__ = "0.1.0"
