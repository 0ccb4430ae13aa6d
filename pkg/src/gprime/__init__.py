"""Primeness analysis for groupoid-graded finite rings and partial skew groupoid rings."""

__version__ = "0.1.0"
