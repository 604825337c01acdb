"""Logging and artifact output helpers."""
