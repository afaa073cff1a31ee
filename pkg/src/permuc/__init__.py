"""Permutation-aware compilation of 2-local Hamiltonian simulation circuits."""

__version__ = "0.1.0"
