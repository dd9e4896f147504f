"""Numerical laboratory for the volume and energy of unit vector fields on S^{2k+1}."""

__version__ = "0.1.0"
