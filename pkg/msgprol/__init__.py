"""Optimal graph prolongation maps and multiscale autoencoder training."""

__version__ = "0.1.0"
