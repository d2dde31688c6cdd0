"""Componentwise linearity of edge ideals of weighted oriented graphs."""

__version__ = "0.1.0"
