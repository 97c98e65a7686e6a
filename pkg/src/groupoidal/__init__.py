"""Inverse semigroups of partial bijections, their groupoids and convolution algebras."""

__version__ = "0.1.0"
