"""Quaternionic slice calculus and S-derivative verification."""

__version__ = "0.1.0"
