"""Norms, band spectra and closed-form norm bounds of almost Mathieu operators at rational angles."""

__version__ = "0.1.0"
