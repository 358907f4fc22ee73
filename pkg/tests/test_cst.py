import numpy as np
import pytest

from artifact import bundled, oracles
from artifact.cst import (compose_twists, fixed_subring, plus_minus_verify, reduce_twists,
                          satisfies_twist, twist_group)
from artifact.rep_core import MatrixRep, close_group, mat
from artifact.ring_core import ring, ring_automorphisms


def _key(tg):
    return sorted((p.sigma.key(), tuple(int(v) for v in p.eta.values)) for p in tg.pairs)


@pytest.mark.parametrize("label", ["D1", "D2", "D3", "R2", "T3"])
def test_twist_group_matches_oracle(label):
    rep = bundled.residual_examples()[label]
    pr = rep.pseudorep()
    auts = ring_automorphisms(rep.ring)
    assert _key(twist_group(pr, auts)) == oracles.twist_group_oracle(pr, auts)


def test_twist_group_is_a_group():
    tg = twist_group(bundled.residual_examples()["D3"].pseudorep())
    assert tg.is_group()
    assert len(tg) == 4
    for a in tg.pairs:
        for b in tg.pairs:
            c = compose_twists(a, b)
            assert satisfies_twist(tg.pr, c.sigma, c.eta.values)


def test_scalar_twist_over_cube_root_ring():
    rho = bundled.sl2_times_unit_scalars()
    sigma = bundled.cube_root_twist_automorphism()
    eta = bundled.scalar_ratio_character(rho, sigma)
    assert satisfies_twist(rho.pseudorep(), sigma, eta)


def test_fixed_subring_of_frobenius():
    A = ring(3, 2, 2)
    frob = [s for s in ring_automorphisms(A) if not s.is_identity()]
    S = fixed_subring(A, frob)
    assert S.size == 9 and S.contains_all(np.arange(9))


def test_reduction_kernel_for_field_is_trivial():
    tg = twist_group(bundled.residual_examples()["D2"].pseudorep())
    red = reduce_twists(tg)
    assert len(red.kernel) == 1 and len(red.raw_kernel) == 1
    assert len(red.image) == len(tg)


def test_plus_minus_on_dihedral_deformation():
    rho, tau = bundled.dihedral_deformation()
    assert plus_minus_verify(rho, tau).ok


def test_identity_pair_always_present():
    F = ring(5)
    rep = MatrixRep.from_image(close_group(F, [mat(F, [2, 1, 0, 3])]))
    tg = twist_group(rep.pseudorep())
    assert any(p.sigma.is_identity() and p.eta.is_trivial() for p in tg.pairs)
