"""Traveling waves of the Lotka-Volterra competition system."""

__version__ = "0.1.0"
