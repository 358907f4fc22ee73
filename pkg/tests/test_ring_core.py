import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact import oracles
from artifact.errors import CapExceeded, InputError
from artifact import caps
from artifact.ring_core import (RingSpec, automorphism_from_images, ideal_span, make_ring,
                                ring, ring_automorphisms, roots_of_unity, sqrt_unit)

RING_SPECS = [
    (5, 1, 1, None), (3, 2, 1, None), (3, 1, 2, None), (3, 2, 2, None),
    (3, 2, 1, [-3, 0, 0, 1]), (5, 1, 1, [0, 0, 0, 1]), (7, 2, 2, None),
    (3, 4, 2, None), (3, 1, 2, [0, 0, 1]),
]


def _ring(spec):
    p, n, f, ext = spec
    return ring(p, n, f, ext=ext)


ring_and_elems = st.sampled_from(RING_SPECS).flatmap(
    lambda spec: st.tuples(st.just(_ring(spec)),
                           *[st.integers(0, _ring(spec).size - 1)] * 3))


@settings(max_examples=300, deadline=None)
@given(ring_and_elems)
def test_ring_axioms(args):
    R, a, b, c = args
    assert R.mul(a, b) == R.mul(b, a)
    assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
    assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
    assert R.add(a, R.neg(a)) == 0
    assert R.mul(a, 1) == a


@settings(max_examples=300, deadline=None)
@given(ring_and_elems)
def test_multiplication_matches_schoolbook(args):
    R, a, b, _ = args
    assert int(R.mul(a, b)) == oracles.naive_mul(R, a, b)


@settings(max_examples=200, deadline=None)
@given(ring_and_elems)
def test_units_and_residue(args):
    R, a, b, _ = args
    F = R.residue_field
    assert F.mul(R.residue(a), R.residue(b)) == R.residue(R.mul(a, b))
    assert bool(R.is_unit(a)) == (int(R.residue(a)) != 0)
    if R.is_unit(a):
        assert R.mul(a, R.inv(a)) == 1


@pytest.mark.parametrize("spec", RING_SPECS[:6])
def test_roots_of_unity_match_scan(spec):
    R = _ring(spec)
    for k in (2, 4, 8):
        if k % R.p == 0:
            continue
        assert sorted(int(v) for v in roots_of_unity(R, k)) == oracles.roots_of_unity_oracle(R, k)


# automorphism counts, frozen from the brute-force oracle
@pytest.mark.parametrize("spec,count", [
    ((3, 2, 1, [-3, 0, 0, 1]), 81),
    ((3, 2, 2, None), 2),
    ((5, 1, 1, [0, 0, 0, 1]), 20),
    ((3, 1, 2, None), 2),
    ((7, 1, 2, None), 2),
    ((3, 3, 1, None), 1),
])
def test_automorphism_counts(spec, count):
    R = _ring(spec)
    auts = ring_automorphisms(R)
    assert len(auts) == count
    if R.size <= 729:
        assert sorted(a.key() for a in auts) == sorted(a.key() for a in
                                                       oracles.ring_automorphisms_oracle(R))


def test_automorphisms_are_multiplicative_bijections():
    R = ring(5, 1, 1, ext=[0, 0, 0, 1])
    xs = np.arange(R.size)
    for s in ring_automorphisms(R):
        img = s.apply(xs)
        assert len(np.unique(img)) == R.size
        assert np.array_equal(s.apply(R.mul(xs, xs[::-1])), R.mul(img, img[::-1]))


def test_frobenius_on_witt_vectors():
    A = ring(3, 2, 2)
    (frob,) = [s for s in ring_automorphisms(A) if not s.is_identity()]
    assert int(frob.apply(A.x)) == int(A.pow(A.x, 3))
    assert frob.compose(frob).is_identity()


def test_sqrt_unit():
    A = ring(5, 1, 1, ext=[0, 0, 0, 1])
    x = int(A.add(1, A.u))
    r = sqrt_unit(A, x)
    assert A.mul(r, r) == x
    assert A.residue(r) == 1


def test_ideal_span_of_maximal_generator():
    A = ring(3, 3)
    assert ideal_span(A, [3]).size == 9
    assert ideal_span(A, [0]).size == 1


def test_named_automorphism():
    A = ring(3, 2, 1, ext=[-3, 0, 0, 1])
    s = automorphism_from_images(A, u_image=int(A.smul(4, A.u)))
    assert int(s.apply(A.mul(A.u, A.u))) == int(A.smul(16, A.mul(A.u, A.u)))


def test_spec_roundtrip():
    spec = {"p": 3, "n": 2, "f": 1, "ext": {"var": "u", "minpoly": [-3, 0, 0, 1]}}
    s = RingSpec.from_json(spec)
    assert RingSpec.from_json(s.to_json()) == s


@pytest.mark.parametrize("bad", [
    {"p": 4}, {"p": 2}, {"n": 1}, {"p": 3, "n": 0}, {"p": 3, "n": True},
    {"p": 3, "ext": {"minpoly": [1, 0, 2]}}, {"p": 3, "ext": {"minpoly": [1]}}, [3],
])
def test_bad_specs_are_input_errors(bad):
    with pytest.raises(InputError):
        make_ring(bad)


def test_parse_elem_rejects_long_lists():
    R = ring(3, 1, 2)
    assert R.parse_elem([1, 2]) == int(R.from_coords([1, 2]))
    with pytest.raises(InputError):
        R.parse_elem([1, 2, 0])
    with pytest.raises(InputError):
        R.parse_elem(True)


def test_ring_cap():
    with caps.override(ring=8):
        with pytest.raises(CapExceeded):
            ring(3, 2)
