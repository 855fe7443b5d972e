"""Mod-l Galois representations of newforms by complex approximation."""

__version__ = "0.1.0"
