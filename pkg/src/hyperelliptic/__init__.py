"""Exact Albanese data of hyperelliptic varieties from rational lattice presentations."""

__version__ = "0.1.0"
