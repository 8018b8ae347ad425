"""Partial crossed product workbench.

Finite-scale validation of partial actions and inverse semigroup actions on
finite-dimensional C*-algebras, their covariant representations, and the
crossed products they generate.
"""

__version__ = "1.0.0"
