"""Hyperbolic surfaces from pants, simple length spectra and their rigidity."""

__version__ = "0.1.0"
