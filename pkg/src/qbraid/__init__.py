"""Exact-arithmetic construction and analysis of a braid-group B3 representation
family built from the q-deformed Pascal triangle."""

__version__ = "1.0.0"
