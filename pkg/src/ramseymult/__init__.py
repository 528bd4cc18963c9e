"""Exact blow-up densities, construction search and certificate checks for
off-diagonal Ramsey multiplicity problems."""

__version__ = "0.1.0"
