"""Bundled example representations used by the verification suite and tests."""

import numpy as np

from .rep_core import MatrixRep, mat
from .ring_core import automorphism_from_images, ring, sqrt_unit


def _rep(R, gens):
    return MatrixRep.from_generators(R, [mat(R, g) for g in gens])


def _unipotents(R):
    return [[1, 1, 0, 1], [1, 0, 1, 1]]


# ---------------------------------------------------------------- residual representations

def binary_tetrahedral_F7():
    """The binary tetrahedral group inside SL_2(F_7)."""
    F = ring(7)
    i = [3, 2, 2, 4]
    j = [0, 1, 6, 0]
    omega = [6, 4, 5, 0]
    return _rep(F, [i, j, omega])


def binary_octahedral_F7():
    """Binary tetrahedral group plus (1 + i)/sqrt(2) with sqrt(2) = 3."""
    F = ring(7)
    return _rep(F, [[3, 2, 2, 4], [0, 1, 6, 0], [6, 4, 5, 0], [6, 3, 3, 4]])


def residual_examples():
    """Twelve residual representations, keyed by a short label.

    R*: reducible, D*: projectively dihedral, T*: tetrahedral, O*: octahedral,
    L*: large image.
    """
    F3, F5, F7 = ring(3), ring(5), ring(7)
    F9, F49 = ring(3, 1, 2), ring(7, 1, 2)
    x9, x49 = F9.x, F49.x
    out = {
        "R1": _rep(F7, [[3, 0, 0, 1]]),
        "R2": _rep(F9, [[x9, 0, 0, 1]]),
        "D1": _rep(F5, [[2, 0, 0, 1], [0, 1, 1, 0]]),
        "D2": _rep(F9, [[x9, 0, 0, 1], [0, 1, 1, 0]]),
        "D3": _rep(F5, [[1, 0, 0, 4], [0, 1, 1, 0]]),
        "T1": _rep(F3, _unipotents(F3)),
        "T2": binary_tetrahedral_F7(),
        "T3": _rep(F9, _unipotents(F9) + [[x9, 0, 0, x9]]),
        "O1": _rep(F3, _unipotents(F3) + [[2, 0, 0, 1]]),
        "O2": binary_octahedral_F7(),
        "L1": _rep(F7, _unipotents(F7) + [[3, 0, 0, 1]]),
        "L2": _rep(F49, _unipotents(F49) + [[x49, 0, 0, x49]]),
    }
    return out


# ---------------------------------------------------------------- deformations

def sl2_times_teichmuller_scalars():
    """SL_2(Z/9) times the scalars generated by a Teichmuller lift of a generator of F_9^x,
    over W(F_9)/9."""
    A = ring(3, 2, 2)
    return _rep(A, _unipotents(A) + [[A.x, 0, 0, A.x]])


def sl2_times_unit_scalars():
    """SL_2(Z/9) times the scalars generated by 1 + u, over (Z/9)[u]/(u^3 - 3)."""
    A = ring(3, 2, 1, ext=[-3, 0, 0, 1])
    one_u = int(A.add(1, A.u))
    return _rep(A, _unipotents(A) + [[one_u, 0, 0, one_u]])


def cube_root_twist_automorphism():
    """u -> 4u on (Z/9)[u]/(u^3 - 3); 4 is a nontrivial cube root of 1 mod 9."""
    A = ring(3, 2, 1, ext=[-3, 0, 0, 1])
    return automorphism_from_images(A, u_image=int(A.smul(4, A.u)))


def dihedral_deformation():
    """Projectively dihedral deformation over F_5[u]/(u^3) with the involution u -> -u.

    Generators: diag(2, 1), the swap w and s*(1, u; u, 1) with s^2 = (1 - u^2)^-1.
    """
    A = ring(5, 1, 1, ext=[0, 0, 0, 1])
    u = A.u
    s = sqrt_unit(A, int(A.inv(A.sub(1, A.mul(u, u)))))
    gamma = [s, int(A.mul(s, u)), int(A.mul(s, u)), s]
    rho = _rep(A, [[2, 0, 0, 1], [0, 1, 1, 0], gamma])
    tau = automorphism_from_images(A, u_image=int(A.neg(u)))
    return rho, tau


def borel_mod_3(n=2):
    """Matrices in GL_2(Z/3^n) that are upper triangular mod 3, level (3).
    Order 972 for n = 2."""
    A = ring(3, n)
    return _rep(A, [[1, 1, 0, 1], [1, 0, 3, 1], [2, 0, 0, 1], [1, 0, 0, 2]])


def full_image_Z49():
    """<(1,1;0,1), (1,0;1,1), diag(s(3), 1)> over Z/49."""
    A = ring(7, 2)
    return _rep(A, _unipotents(A) + [[int(A.teich(3)), 0, 0, 1]])


def full_image_F7():
    F = ring(7)
    return _rep(F, _unipotents(F) + [[3, 0, 0, 1]])


def triangular_Z9():
    """Upper unitriangular matrices over Z/9 with diagonal units: level (0)."""
    A = ring(3, 2)
    return _rep(A, [[1, 1, 0, 1], [2, 0, 0, 1]])


def scalar_ratio_character(rho, sigma):
    """eta(x^k h) = (sigma(x)/x)^k for rho = SL_2 * <x I>, where x is the scalar generator."""
    A = rho.ring
    x = int(A.add(1, A.u))
    ratio = int(A.mul(sigma.apply(x), A.inv(x)))
    dets = rho.det()
    k_of = {}
    cur, k = 1, 0
    while True:
        k_of.setdefault(cur, k)
        cur = int(A.mul(cur, A.mul(x, x)))
        k += 1
        if cur == 1:
            break
    ks = np.array([k_of[int(v)] for v in dets], dtype=np.int64)
    return np.array([int(A.pow(ratio, int(k))) for k in ks], dtype=np.int64)
