"""Exact construction and certification of partial difference sets and
amorphic association schemes on finite abelian groups."""

__version__ = "0.1.0"
