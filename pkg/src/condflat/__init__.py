"""Conditional flatness audits for localization functors on finite groups."""

__version__ = "0.1.0"
