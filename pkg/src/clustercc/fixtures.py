"""Shipped affine Cartan triples used by the CLI and the test suite."""

from __future__ import annotations

from .cartan import CartanTriple, validate


def b3tilde() -> CartanTriple:
    """Affine triple of type B3-tilde with symmetrizer (1,2,2,1)."""
    C = [[2, -2, 0, 0],
         [-1, 2, -1, 0],
         [0, -1, 2, -1],
         [0, 0, -2, 2]]
    D = [1, 2, 2, 1]
    omega = {(2, 3), (1, 2), (0, 1)}
    return validate(C, D, omega)


def a1tilde() -> CartanTriple:
    """Rank-2 affine triple (c12*c21 = 4, symmetric); it has no tubes."""
    C = [[2, -2], [-2, 2]]
    D = [1, 1]
    omega = {(0, 1)}
    return validate(C, D, omega)


def a2tilde() -> CartanTriple:
    """Affine triple of type A2-tilde: acyclically oriented triangle."""
    C = [[2, -1, -1],
         [-1, 2, -1],
         [-1, -1, 2]]
    D = [1, 1, 1]
    omega = {(0, 1), (1, 2), (0, 2)}
    return validate(C, D, omega)


FIXTURES = {
    "b3tilde": b3tilde,
    "a1tilde": a1tilde,
    "a2tilde": a2tilde,
}
