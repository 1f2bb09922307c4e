"""Merge decompositions of finite semigroups, certified two-sided
Krohn-Rhodes decompositions, and aperiodic pointlike sets."""

__version__ = "0.1.0"
