"""Exact-arithmetic toolkit for twisted affinisations of Hilbert-Lie algebras at finite rank."""

__version__ = "0.1.0"
