"""Exact computational Lie theory: Chevalley groups of types F4, E6, E7 in
their adjoint representations over finite fields, PSL2 subgroup
constructions inside them, and the cubic-form machinery for the
27-dimensional module."""

__version__ = "0.1.0"
