"""Exact algebra for contraction identities, twisted HKR-type pairs, Verbitsky
algebras, Jacobi diagrams with Lie weight systems, and symplectic block
normalizers."""

__version__ = "0.1.0"
