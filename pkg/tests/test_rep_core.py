import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact import bundled
from artifact.errors import CapExceeded, InputError, PreconditionError
from artifact.rep_core import (MatrixRep, ad0_trace, ad0_trace_formula, close_group, mat,
                               mat_det, mat_from_json, mat_inv, mat_mul, mat_to_json,
                               recover_twist, validate_pseudorep)
from artifact.ring_core import ring


def _gl2(F):
    gens = [[1, 1, 0, 1], [1, 0, 1, 1]] + [[int(F.x) if F.f > 1 else _prim(F), 0, 0, 1]]
    return close_group(F, [mat(F, g) for g in gens])


def _prim(F):
    return next(a for a in range(2, F.size) if F.mult_order(a) == F.size - 1)


@pytest.mark.parametrize("p,f,order", [(3, 1, 48), (5, 1, 480), (3, 2, 5760), (7, 1, 2016)])
def test_gl2_orders(p, f, order):
    assert len(_gl2(ring(p, 1, f))) == order


def test_sl2_f3_and_borel_orders():
    F3 = ring(3)
    assert len(close_group(F3, [mat(F3, [1, 1, 0, 1]), mat(F3, [1, 0, 1, 1])])) == 24
    assert len(bundled.borel_mod_3().source) == 972


mats9 = st.lists(st.integers(0, 80), min_size=4, max_size=4)


@settings(max_examples=200, deadline=None)
@given(mats9, mats9)
def test_det_is_multiplicative(a, b):
    R = ring(3, 2, 2)
    X, Y = np.array(a), np.array(b)
    assert R.mul(mat_det(R, X), mat_det(R, Y)) == mat_det(R, mat_mul(R, X, Y))


@settings(max_examples=200, deadline=None)
@given(mats9)
def test_inverse(a):
    R = ring(3, 2, 2)
    X = np.array(a)
    if R.is_unit(mat_det(R, X)):
        assert np.array_equal(mat_mul(R, X, mat_inv(R, X)), np.array([1, 0, 0, 1]))


def test_adjoint_trace_formula_on_gl2_f5():
    rep = MatrixRep.from_image(_gl2(ring(5)))
    R = rep.ring
    assert np.array_equal(ad0_trace(rep), ad0_trace_formula(R, rep.trace(), rep.det()))


def test_group_table_is_consistent():
    G = bundled.binary_tetrahedral_F7().source
    T = G.table()
    e = G.identity_index()
    assert np.all(T[e] == np.arange(len(G)))
    assert np.all(T[np.arange(len(G)), G.inv(np.arange(len(G)))] == e)
    assert len(G.elements[G.derived_subgroup()]) == 8


def test_characters_of_cyclic_group():
    rep = bundled.residual_examples()["R1"]       # cyclic of order 6 over F_7
    chars = rep.source.characters(rep.ring)
    assert len(chars) == 6
    assert all(c.is_multiplicative() for c in chars)


def test_pseudorep_axioms_hold_for_a_rep():
    rep = bundled.binary_octahedral_F7()
    assert validate_pseudorep(rep.pseudorep()).ok


def test_twist_recovery_on_twisted_copy():
    rep = bundled.residual_examples()["D1"]
    chars = rep.source.characters(rep.ring)
    for chi in chars:
        eta, T = recover_twist(rep.twist(chi), rep)
        assert np.array_equal(T.mul(eta.values, rep.trace()), rep.twist(chi).trace())


def test_matrix_json_roundtrip():
    R = ring(3, 1, 2)
    X = np.array([1, R.x, 0, 2])
    assert np.array_equal(mat_from_json(R, mat_to_json(R, X)), X)
    assert np.array_equal(mat_from_json(R, [[1, [0, 1]], [0, 2]]), X)
    with pytest.raises(InputError):
        mat_from_json(R, [1, 2, 3])


def test_singular_generator_is_rejected():
    F = ring(5)
    with pytest.raises(PreconditionError):
        close_group(F, [mat(F, [1, 2, 2, 4])])


def test_group_cap():
    F = ring(7)
    with pytest.raises(CapExceeded):
        close_group(F, [mat(F, [1, 1, 0, 1]), mat(F, [1, 0, 1, 1])], cap=100)
