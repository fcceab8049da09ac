"""Computational experiments on the compositeness of shifted exponentials a^n - b."""

__version__ = "0.1.0"
