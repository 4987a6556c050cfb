"""Battleship on lattice shapes: geometry, strategies, exact solver and audits."""

__version__ = "0.1.0"
