"""Variational helium-like solver with delta-corrected hydrogenic orbitals."""
