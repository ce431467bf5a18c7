"""Context-sensitive spell checking with n-gram ranking, plus an evaluation workbench."""

__version__ = "0.1.0"
