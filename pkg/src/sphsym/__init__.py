"""Spherical and circular symmetrisation of sets with perimeter engines and rigidity checks."""

__version__ = "0.1.0"
