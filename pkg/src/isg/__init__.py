"""Supersingular isogeny graphs over F_{p^2}, their quaternion counterpart,
lattice generation checks and two toy protocols built on the graphs."""

__version__ = "0.1.0"
