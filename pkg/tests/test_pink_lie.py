import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact import bundled, oracles
from artifact.errors import PreconditionError
from artifact.pink_lie import (LieSubmodule, bracket, congruence_subgroup, decompose_lie,
                               level_detector, pink_filtration, theta)
from artifact.rep_core import close_group, mat
from artifact.ring_core import ideal_span, ring


def _as_set(L):
    return set(map(tuple, np.asarray(L.elements()).tolist()))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_congruence_filtration_is_sl2_of_powers(n):
    A = ring(3, 3)
    G = congruence_subgroup(A, ideal_span(A, [3]))
    Ls = pink_filtration(G, n)
    assert Ls[-1] == LieSubmodule.sl2(A, ideal_span(A, [3 ** n % A.mod]))


triples27 = st.lists(st.integers(0, 26), min_size=3, max_size=3)


@settings(max_examples=150, deadline=None)
@given(triples27, triples27, triples27)
def test_bracket_is_alternating_and_jacobi(x, y, z):
    R = ring(3, 3)
    x, y, z = (np.array(v) for v in (x, y, z))
    assert np.all(bracket(R, x, x) == 0)
    assert np.array_equal(bracket(R, x, y), R.neg(bracket(R, y, x)))
    jac = R.add(R.add(bracket(R, x, bracket(R, y, z)), bracket(R, y, bracket(R, z, x))),
                bracket(R, z, bracket(R, x, y)))
    assert np.all(jac == 0)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8)),
                min_size=1, max_size=2))
def test_filtration_matches_oracle(params):
    A = ring(3, 3)
    gens = []
    for a, b, c in params:
        one_a = 1 + 3 * a
        gens.append(mat(A, [one_a, 3 * b, 3 * c,
                            int(A.mul(A.add(1, A.mul(3 * b, 3 * c)), A.inv(one_a)))]))
    G = close_group(A, gens)
    Ls = pink_filtration(G, 3)
    want = oracles.pink_filtration_oracle(A, G.elements, 3)
    assert [_as_set(L) for L in Ls] == want


def test_theta_kills_scalars():
    A = ring(3, 2)
    assert np.all(theta(A, np.array([4, 0, 0, 4])) == 0)


def test_filtration_needs_sr1():
    F = ring(7)
    G = close_group(F, [mat(F, [3, 0, 0, 5])])
    with pytest.raises(PreconditionError):
        pink_filtration(G, 1)


def test_congruence_subgroup_orders():
    A = ring(3, 3)
    assert len(congruence_subgroup(A, ideal_span(A, [3]))) == 729
    assert len(congruence_subgroup(A, ideal_span(A, [9]))) == 27


def test_decomposition_of_congruence_algebra():
    A = ring(3, 2)
    L = pink_filtration(congruence_subgroup(A, ideal_span(A, [3])), 1)[0]
    dec = decompose_lie(L)
    assert dec.strong
    assert dec.I.basis() == [3] and dec.B.basis() == [3] and dec.C.basis() == [3]


# levels, frozen from the detector and checked by hand: the Borel group mod 3 contains
# Gamma(3) but no conjugate of Gamma(1), the unitriangular group contains only Gamma(0)
def test_level_of_borel_group():
    res = level_detector(bundled.borel_mod_3().source)
    assert res.ideal.size == 3 and res.generators == [3]


def test_level_of_triangular_group():
    res = level_detector(bundled.triangular_Z9().source)
    assert res.ideal.size == 1 and res.generators == []


def test_level_of_full_group_is_unit_ideal():
    res = level_detector(bundled.full_image_F7().source)
    assert res.ideal.size == 7
