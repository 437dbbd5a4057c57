"""Exact computer algebra for affine-type cluster algebras.

Mutation of seeds with coefficients, Caldero-Chapoton data of rigid
locally free modules built by reflection recurrences, a brute-force
finite-field oracle, and generic basis elements parametrized by
g-vectors.
"""

from .cartan import CartanTriple, validate, null_root
from .errors import ClusterCCError

__all__ = ["CartanTriple", "validate", "null_root", "ClusterCCError"]
