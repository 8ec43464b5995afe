"""Exact semilinear algebra over truncated Witt-coefficient series rings."""

__version__ = "0.1.0"
