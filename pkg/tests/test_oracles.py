"""Sanity checks of the brute-force references themselves."""

import numpy as np

from artifact import oracles
from artifact.rep_core import close_group, mat
from artifact.ring_core import ring


def test_naive_mul_small_cases():
    F9 = ring(3, 1, 2)
    x = int(F9.x)
    # x is a root of the defining polynomial, so x^2 is a combination of 1 and x
    x2 = oracles.naive_mul(F9, x, x)
    assert x2 == int(F9.mul(x, x))
    assert oracles.naive_mul(F9, 1, x) == x


def test_roots_oracle_counts():
    assert len(oracles.roots_of_unity_oracle(ring(3, 2), 2)) == 2
    assert len(oracles.roots_of_unity_oracle(ring(3, 1, 2), 8)) == 8


def test_automorphisms_oracle_on_prime_ring():
    auts = oracles.ring_automorphisms_oracle(ring(3, 3))
    assert len(auts) == 1 and auts[0].is_identity()


def test_homomorphisms_from_klein_group():
    F3 = ring(3)
    V = close_group(F3, [mat(F3, [2, 0, 0, 1]), mat(F3, [1, 0, 0, 2])])
    homs = oracles.homomorphisms(V, V)
    assert all(h.is_homomorphism() for h in homs)
    # V is abelian, so conjugation classes are singletons: all 16 maps V -> V
    assert len(homs) == 16


def test_class_representatives_of_s3_image():
    F5 = ring(5)
    T = close_group(F5, [mat(F5, [0, 1, 1, 0]), mat(F5, [0, 4, 1, 4])])
    assert len(T) == 6
    assert len(oracles.conjugacy_class_representatives(T)) == 3


def test_pink_oracle_on_trivial_group():
    A = ring(3, 2)
    out = oracles.pink_filtration_oracle(A, np.array([[1, 0, 0, 1]]), 2)
    assert out == [{(0, 0, 0)}, {(0, 0, 0)}]
