"""Workbench for desk-scale tree topology combinatorics."""

__version__ = "0.1.0"
