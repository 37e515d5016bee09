"""Exact Theta pairing of modules over isolated hypersurface singularities."""

__version__ = "0.1.0"
