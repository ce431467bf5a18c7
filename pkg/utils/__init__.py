"""Shared helpers: file formats and experiment tracking."""
