"""Exact symbolic toolkit for transversality analysis of polynomial
holomorphic maps between real-algebraic hypersurfaces."""

__version__ = "0.1.0"
