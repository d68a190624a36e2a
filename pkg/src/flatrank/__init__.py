"""Exact Koszul-Young flattenings and certified symmetric border rank
lower bounds for the determinant and permanent."""

__version__ = "0.1.0"
