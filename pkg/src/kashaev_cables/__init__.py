"""Kashaev invariants of (m,2)-cables of knots and their volume-conjecture asymptotics."""

__version__ = "0.1.0"
