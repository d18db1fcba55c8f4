"""Dual complexes of simple-normal-crossing divisors and their invariants."""

__version__ = "0.1.0"
