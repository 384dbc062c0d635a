"""Torsors of finite etale group schemes: invariants, enumeration over Q and leading constants."""

__version__ = "0.1.0"
