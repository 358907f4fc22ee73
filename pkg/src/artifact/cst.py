"""Conjugate self-twists (sigma, eta) of pseudorepresentations over finite rings."""

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .modules import ZpnModule
from .rep_core import Character, PseudoRep
from .ring_core import (RingAut, involution_split, ring_automorphisms, teichmuller_span,
                        frobenius_power, Span)


@dataclass(eq=False)
class TwistPair:
    sigma: RingAut
    eta: Character
    generalized: bool = False

    def key(self):
        return (self.sigma.key(), self.eta.key())

    def __eq__(self, other):
        return isinstance(other, TwistPair) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_json(self):
        R = self.eta.ring
        return {"sigma": self.sigma.to_json(),
                "eta": [R.to_list(int(v)) for v in self.eta.values],
                "generalized": self.generalized}

    def __repr__(self):
        return f"TwistPair(sigma={self.sigma.to_json()}, eta_order={self.eta.order()})"


def satisfies_twist(pr, sigma, eta_values):
    """sigma(t) = eta t and sigma(d) = eta^2 d at every group element."""
    R = pr.ring
    t, d = np.asarray(pr.t), np.asarray(pr.d)
    eta = np.asarray(eta_values)
    return bool(np.array_equal(sigma.apply(t), R.mul(eta, t)) and
                np.array_equal(sigma.apply(d), R.mul(R.mul(eta, eta), d)))


def compose_twists(a, b):
    """(sigma, eta)(tau, chi) = (sigma after tau, sigma(chi) * eta)."""
    R = a.eta.ring
    sigma = a.sigma.compose(b.sigma)
    eta = R.mul(a.sigma.apply(b.eta.values), a.eta.values)
    return TwistPair(sigma, Character(a.eta.group, R, eta), a.generalized or b.generalized)


def _teichmuller_constant_det(pr):
    R = pr.ring
    d = np.asarray(pr.d)
    return bool(np.array_equal(R.teich(R.residue(d)), d))


class TwistGroup:
    """A finite list of twist pairs with the composition law."""

    def __init__(self, pr, pairs):
        self.pr = pr
        self.pairs = list(pairs)
        self._index = {p.key(): i for i, p in enumerate(self.pairs)}

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def index(self, pair):
        return self._index.get(pair.key(), -1)

    def identity_index(self):
        for i, p in enumerate(self.pairs):
            if p.sigma.is_identity() and p.eta.is_trivial():
                return i
        return -1

    def table(self):
        n = len(self.pairs)
        T = np.full((n, n), -1, dtype=np.int64)
        for i, a in enumerate(self.pairs):
            for j, b in enumerate(self.pairs):
                T[i, j] = self.index(compose_twists(a, b))
        return T

    def is_group(self):
        """Closure, identity and inverses under the composition law."""
        if self.identity_index() < 0:
            return False
        T = self.table()
        if (T < 0).any():
            return False
        e = self.identity_index()
        return bool(all((T[i] == e).any() for i in range(len(self.pairs))))

    def sigmas(self):
        """Distinct automorphisms occurring (the image in Aut A)."""
        seen = {}
        for p in self.pairs:
            seen.setdefault(p.sigma.key(), p.sigma)
        return list(seen.values())

    def di(self):
        """Pairs with sigma = id."""
        return [p for p in self.pairs if p.sigma.is_identity()]

    def sigma_abelian(self):
        S = self.sigmas()
        return all(a.compose(b) == b.compose(a) for a in S for b in S)

    def sigma_determined_by_eta(self):
        seen = {}
        for p in self.pairs:
            k = p.eta.key()
            if k in seen and seen[k] != p.sigma.key():
                return False
            seen[k] = p.sigma.key()
        return True

    def kernel_intersection(self):
        """Indices of group elements in the kernel of every eta."""
        G = self.pr.group
        mask = np.ones(len(G), dtype=bool)
        for p in self.pairs:
            mask &= p.eta.values == 1
        return np.flatnonzero(mask)

    def to_json(self):
        return [p.to_json() for p in self.pairs]


def _matching_characters(pr, sigma, labels, rows, chunk=256):
    """Rows of the character table with sigma(t) = eta t and sigma(d) = eta^2 d,
    filtered a block of group elements at a time."""
    R = pr.ring
    t, d = np.asarray(pr.t), np.asarray(pr.d)
    st, sd = sigma.apply(t), sigma.apply(d)
    alive = np.arange(len(rows))
    for s in range(0, len(t), chunk):
        if not len(alive):
            break
        cols = labels[s:s + chunk]
        vals = rows[alive][:, cols]
        ok = np.all(R.mul(vals, t[None, s:s + chunk]) == st[None, s:s + chunk], axis=1)
        ok &= np.all(R.mul(R.mul(vals, vals), d[None, s:s + chunk]) == sd[None, s:s + chunk], axis=1)
        alive = alive[ok]
    return alive


def twist_group(pr, auts=None, coefficient_subring=None, characters=None):
    """Every (sigma, eta) with sigma in auts and eta a character of the group.

    A pair is flagged generalized when the determinant is not a Teichmuller
    constant, or sigma or eta leaves the declared coefficient subring.
    """
    R = pr.ring
    G = pr.group
    if auts is None:
        auts = ring_automorphisms(R)
    if characters is None:
        labels, rows = G.character_table(R)
    else:
        labels = np.arange(len(G))
        rows = np.array([c.values for c in characters], dtype=np.int64).reshape(-1, len(G))
    teich_det = _teichmuller_constant_det(pr)
    coef_basis = None
    if coefficient_subring is not None:
        coef_basis = np.array(coefficient_subring.basis() or [0])
    pairs = []
    for sigma in auts:
        for i in _matching_characters(pr, sigma, labels, rows):
            eta = Character(G, R, rows[i][labels])
            gen = not teich_det
            if coef_basis is not None:
                gen = gen or not coefficient_subring.contains_all(sigma.apply(coef_basis))
                gen = gen or not coefficient_subring.contains_all(np.unique(eta.values))
            pairs.append(TwistPair(sigma, eta, gen))
    return TwistGroup(pr, pairs)


def fixed_subring(r, sigmas):
    """Pointwise fixed subring of a list of automorphisms, by a kernel computation."""
    from .pink_lie import Subring
    D = r.D
    sigmas = [s for s in sigmas if not s.is_identity()]
    if not sigmas:
        return Subring(r, Span.whole(r).module)
    width = D * (1 + len(sigmas))
    rows = []
    eye = np.eye(D, dtype=np.int64)
    for k in range(D):
        row = [eye[k]] + [(s.M[k] - eye[k]) % r.mod for s in sigmas]
        rows.append(np.concatenate(row))
    M = ZpnModule(r.p, r.n, width, np.array(rows))
    return Subring(r, M.intersect_coordinates(range(D)))


def residue_automorphism(sigma):
    """The automorphism of the residue field induced by sigma."""
    F = sigma.ring.residue_field
    return frobenius_power(F, sigma.residue_exponent())


@dataclass
class Reduction:
    image: list                  # distinct reduced pairs, in order of first appearance
    reduced: list                # reduced pair for each input pair
    raw_kernel: list             # pairs reducing to (id, 1)
    kernel: list                 # automorphisms sigma of the group with trivial reduction
    consistent: bool = True


def reduce_twists(tg):
    """beta_t: reduce each pair to the residue field and collect kernels."""
    pr = tg.pr
    R = pr.ring
    F = R.residue_field
    rbar = pr.reduce()
    image, reduced, raw = [], [], []
    seen = set()
    for p in tg.pairs:
        sb = residue_automorphism(p.sigma)
        eb = Character(pr.group, F, R.residue(p.eta.values))
        if not satisfies_twist(rbar, sb, eb.values):
            raise PreconditionError("reduced pair is not a residual conjugate self-twist")
        q = TwistPair(sb, eb)
        reduced.append(q)
        if q.key() not in seen:
            seen.add(q.key())
            image.append(q)
        if sb.is_identity() and eb.is_trivial():
            raw.append(p)
    kernel = {}
    for p, q in zip(tg.pairs, reduced):
        if q.sigma.is_identity():
            kernel.setdefault(p.sigma.key(), p.sigma)
    return Reduction(image, reduced, raw, list(kernel.values()))


@dataclass
class PlusMinusVerdict:
    plus_ok: bool
    minus_ok: bool
    plus_size: int = 0
    minus_size: int = 0
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.plus_ok and self.minus_ok


def plus_minus_verify(rho, tau):
    """Check A+ = W(F)(Z/p^n + I_1 + I_1^2) and A- = W(F)B_1 for an involution tau
    in the kernel of the reduction map."""
    from .pink_lie import decompose_lie, in_SR1, pink_filtration
    from .residual_analysis import projective_class
    sigma = tau.sigma if isinstance(tau, TwistPair) else tau
    R = rho.ring
    if sigma.is_identity():
        raise PreconditionError("tau must be nontrivial")
    if not residue_automorphism(sigma).is_identity():
        raise PreconditionError("tau does not reduce to the identity")
    pc = projective_class(rho.reduce())
    if pc.family != "dihedral" or pc.order <= 4:
        raise PreconditionError("residual representation is not projectively dihedral nonabelian",
                                projective_class=pc.tag)
    plus, minus = involution_split(R, sigma)
    G = rho.image_group()
    Gamma = G.subgroup(np.flatnonzero(in_SR1(R, G.elements)))
    dec = decompose_lie(pink_filtration(Gamma, 1)[0])
    if not dec.decomposable:
        raise PreconditionError("L_1 is not decomposable")
    WF = teichmuller_span(R)
    I1, B1 = dec.I, dec.B
    gens = Span.of(R, [1]) + I1
    if I1.basis():
        gens = gens + I1.times(I1)
    plus_span = WF.times(gens)
    minus_span = WF.times(B1) if B1.basis() else Span.of(R, [])
    return PlusMinusVerdict(plus_span == plus, minus_span == minus, plus.size, minus.size,
                            {"I1_size": I1.size, "B1_size": B1.size})
