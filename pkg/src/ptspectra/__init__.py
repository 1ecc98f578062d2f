"""Spectra of box-truncated PT-symmetric Hamiltonians H = p^2 - g (i x)^(2n+1)."""
__version__ = "0.1.0"
