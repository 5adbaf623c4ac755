"""Exact q,t,a invariants of colored iterated torus links in type A."""

__version__ = "0.1.0"
