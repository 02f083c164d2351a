"""Two-ray game verification for index-2 codimension-4 Fano 3-folds."""

__version__ = "0.1.0"
