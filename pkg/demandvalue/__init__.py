"""Relative value of pooled spatio-temporal demand datasets."""

__version__ = "0.1.0"
