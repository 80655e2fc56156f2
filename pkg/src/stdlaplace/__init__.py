"""Exact toolkit for Weitzenböck formulas and generalized gradients on holonomy reductions."""

__version__ = "0.1.0"
