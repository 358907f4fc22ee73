"""Residual representations over finite fields: projective class, the field E,
regularity, residual twists, dihedral structures and basis normalization."""

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import PreconditionError
from .rep_core import (MatrixRep, PseudoRep, classify_pseudorep, is_scalar, mat_inv, mat_mul,
                       invariant_lines, conjugate)
from .ring_core import (element_degree, embed, quadratic_extension, ring_automorphisms,
                        subfield_elements, subfield_generator)


# ---------------------------------------------------------------- subfields

@dataclass
class Subfield:
    field: object          # the ambient finite field ring
    degree: int

    @property
    def generator(self):
        return subfield_generator(self.field, self.degree)

    @property
    def size(self):
        return self.field.p ** self.degree

    def elements(self):
        return subfield_elements(self.field, self.degree)

    def contains(self, a):
        F = self.field
        a = np.asarray(a, dtype=np.int64)
        return F.pow(a, self.size) == a

    def to_json(self):
        return {"degree": self.degree, "generator": self.field.to_list(self.generator)}


def _lcm(a, b):
    return a * b // gcd(a, b)


def compute_E(pr):
    """Smallest subfield containing every t(g)^2/d(g)."""
    F = pr.ring
    if not F.is_field:
        raise PreconditionError("compute_E needs a pseudorepresentation over a field")
    vals = np.unique(F.mul(F.mul(pr.t, pr.t), F.inv(pr.d)))
    deg = 1
    for v in vals:
        deg = _lcm(deg, element_degree(F, int(v)))
    return Subfield(F, deg)


# ---------------------------------------------------------------- projective class

@dataclass
class ProjectiveClass:
    tag: str
    family: str            # cyclic, dihedral, exceptional, large
    order: int
    alias: str = None
    witness: object = None
    order_counts: dict = field(default_factory=dict)

    def to_json(self):
        out = {"tag": self.tag, "family": self.family, "order": self.order}
        if self.alias:
            out["alias"] = self.alias
        return out


_EXCEPTIONAL = {
    "A4": {1: 1, 2: 3, 3: 8},
    "S4": {1: 1, 2: 9, 3: 8, 4: 6},
    "A5": {1: 1, 2: 15, 3: 20, 5: 24},
}


def projective_orders(G):
    """Smallest k >= 1 with g^k scalar, for every element of G."""
    N = len(G)
    out = np.zeros(N, dtype=np.int64)
    cur = np.arange(N)
    allg = np.arange(N)
    k = 1
    while (out == 0).any():
        hit = is_scalar(G.elements[cur]) & (out == 0)
        out[hit] = k
        cur = G.mul(cur, allg)
        k += 1
    return out


def projective_class(rhobar):
    """Cyclic, dihedral, A4, S4, A5, PSL2(q') or PGL2(q') for the projective image."""
    F = rhobar.ring
    G = rhobar.image_group()
    scal = is_scalar(G.elements)
    z = int(scal.sum())
    m = len(G) // z
    porders = projective_orders(G)
    counts = {}
    for o in porders:
        counts[int(o)] = counts.get(int(o), 0) + 1
    counts = {k: v // z for k, v in sorted(counts.items())}
    if m in counts:
        g = int(np.flatnonzero(porders == m)[0])
        return ProjectiveClass(f"cyclic({m})", "cyclic", m, witness=g, order_counts=counts)
    if m % 2 == 0:
        half = m // 2
        for h in np.flatnonzero(porders == half):
            sub = np.zeros(len(G), dtype=bool)
            cur = np.flatnonzero(scal)
            for _ in range(half):
                sub[cur] = True
                cur = G.mul(cur, np.full(len(cur), int(h)))
            if np.all(porders[~sub] == 2):
                return ProjectiveClass(f"dihedral({m})", "dihedral", m, witness=int(h),
                                       order_counts=counts)
    for tag, sig in _EXCEPTIONAL.items():
        if counts == sig:
            alias = None
            if tag == "A4" and F.p == 3:
                alias = "PSL2(3)"
            elif tag == "S4" and F.p == 3:
                alias = "PGL2(3)"
            elif tag == "A5" and F.p == 5:
                alias = "PSL2(5)"
            return ProjectiveClass(tag, "exceptional", m, alias=alias, order_counts=counts)
    qq = F.p
    while qq <= F.q:
        if qq * (qq * qq - 1) // 2 == m:
            return ProjectiveClass(f"PSL2({qq})", "large", m, order_counts=counts)
        if qq * (qq * qq - 1) == m:
            return ProjectiveClass(f"PGL2({qq})", "large", m, order_counts=counts)
        qq *= F.p
    raise AssertionError(f"unclassifiable projective image of order {m}")


# ---------------------------------------------------------------- eigenvalues and regularity

def _is_square(F, a):
    a = np.asarray(a, dtype=np.int64)
    return (a == 0) | (F.pow(a, (F.q - 1) // 2) == 1)


def _in_subfield(F, k, a):
    a = np.asarray(a, dtype=np.int64)
    return F.pow(a, F.p ** k) == a


def eigenvalues(F, t, d):
    """Roots of Y^2 - tY + d, returned in F or its quadratic extension."""
    for K in (F, quadratic_extension(F)):
        tt = int(embed(F, K, t)) if K is not F else int(t)
        dd = int(embed(F, K, d)) if K is not F else int(d)
        y = K.elements()
        val = K.add(K.sub(K.mul(y, y), K.mul(tt, y)), dd)
        roots = y[val == 0]
        if len(roots):
            lam = int(roots[0])
            mu = int(K.sub(tt, lam))
            return lam, mu, K
    raise AssertionError("quadratic has no root in the quadratic extension")


@dataclass
class RegularityReport:
    E: Subfield
    regular: bool
    witness: int = None             # index in the source group
    eigen: tuple = None             # (lambda0, mu0, field)
    ratio: int = None               # lambda0/mu0 in the eigenvalue field
    strongly_regular: bool = False
    strong_witness: int = None
    good: bool = None
    good_clause: int = None

    def to_json(self):
        out = {"E": self.E.to_json(), "regular": self.regular,
               "strongly_regular": self.strongly_regular}
        if self.regular:
            lam, mu, K = self.eigen
            out["witness"] = self.witness
            out["eigenvalues"] = [K.to_list(lam), K.to_list(mu)]
        if self.good is not None:
            out["good"] = self.good
            out["good_clause"] = self.good_clause
        return out


def regular_mask(F, E_degree, t, d):
    """g is regular iff s = t^2/d avoids {0, 4} and s(s-4) is a square in E."""
    t, d = np.asarray(t), np.asarray(d)
    s = F.mul(F.mul(t, t), F.inv(d))
    ok = (s != 0) & (s != 4 % F.p)
    disc = F.mul(s, F.sub(s, 4 % F.p))
    return ok & _square_in_subfield(F, E_degree, disc)


def _square_in_subfield(F, k, a):
    """a (already in the subfield of degree k) is a square there."""
    a = np.asarray(a, dtype=np.int64)
    q = F.p ** k
    return (a == 0) | (F.pow(a, (q - 1) // 2) == 1)


def strong_mask(F, E_degree, t, d):
    t, d = np.asarray(t), np.asarray(d)
    inE = _in_subfield(F, E_degree, t) & _in_subfield(F, E_degree, d)
    disc = F.sub(F.mul(t, t), F.smul(4, d))
    return inE & _square_in_subfield(F, E_degree, np.where(inE, disc, 0))


def regularity_status(rhobar, twists=None):
    F = rhobar.ring
    pr = rhobar.pseudorep()
    E = compute_E(pr)
    t, d = np.asarray(pr.t), np.asarray(pr.d)
    reg = regular_mask(F, E.degree, t, d)
    rep = RegularityReport(E, bool(reg.any()))
    if rep.regular:
        g = int(np.flatnonzero(reg)[0])
        lam, mu, K = eigenvalues(F, int(t[g]), int(d[g]))
        rep.witness, rep.eigen = g, (lam, mu, K)
        rep.ratio = int(K.mul(lam, K.inv(mu)))
        strong = reg & strong_mask(F, E.degree, t, d)
        rep.strongly_regular = bool(strong.any())
        if rep.strongly_regular:
            rep.strong_witness = int(np.flatnonzero(strong)[0])
        pc = projective_class(rhobar)
        if pc.tag == "S4":
            rep.good, rep.good_clause = _goodness(rhobar, rep, reg, twists)
    return rep


def _goodness(rhobar, rep, reg, twists):
    F = rhobar.ring
    if F.p % 3 == 1:
        return True, 1
    if rep.strongly_regular:
        return True, 2
    tw = residual_twists(rhobar) if twists is None else twists
    pi0 = np.zeros(len(rhobar.source), dtype=bool)
    pi0[tw.pi0] = True
    G = rhobar.source
    for g in np.flatnonzero(reg):
        if pi0[G.mul(int(g), int(g))]:
            return True, 3
    return False, None


# ---------------------------------------------------------------- residual twists

@dataclass
class ResidualTwistGroup:
    group: object                 # TwistGroup
    pairs: list
    sigma_di: list
    pi0: np.ndarray
    closed: bool

    def fixed_field_degree(self):
        F = self.group.pr.ring
        deg = F.f
        for s in self.group.sigmas():
            i = s.residue_exponent()
            deg = gcd(deg, i) if i else deg
        return deg

    def to_json(self):
        return {"pairs": self.group.to_json(), "di": len(self.sigma_di),
                "pi0_index": len(self.group.pr.group) // len(self.pi0)}


def residual_twists(rhobar):
    from .cst import twist_group
    pr = rhobar.pseudorep()
    F = rhobar.ring
    tg = twist_group(pr, ring_automorphisms(F))
    closed = tg.is_group()
    if not closed:
        raise AssertionError("residual twists are not closed under composition")
    return ResidualTwistGroup(tg, tg.pairs, tg.di(), tg.kernel_intersection(), closed)


# ---------------------------------------------------------------- dihedral structures

def dihedral_structures(rhobar):
    """Index-2 subgroups H with rhobar restricted to H reducible, with a constituent."""
    pr = rhobar.pseudorep()
    cls = classify_pseudorep(pr, absolute=rhobar.ring.is_field)
    if cls.reducible:
        raise PreconditionError("dihedral_structures needs an absolutely irreducible input")
    G = rhobar.source
    out = []
    for mask in G.index2_subgroups():
        idx = np.flatnonzero(mask)
        H = G.subgroup(idx)
        sub = PseudoRep(H, pr.ring, np.asarray(pr.t)[idx], np.asarray(pr.d)[idx])
        c = classify_pseudorep(sub, absolute=True)
        if c.reducible:
            out.append((mask, c.constituents[0]))
    return out


# ---------------------------------------------------------------- basis normalization

@dataclass
class NormalizedBasis:
    rep: MatrixRep
    conjugator: np.ndarray       # x with new(g) = x rho(g) x^-1
    g0: int
    lam0: int
    mu0: int
    power: int                   # n with g0^n in Pi_0 and rho(g0^n) non-scalar (or None)


def in_Z_GL2_E(F, E_degree, mats):
    """Each matrix is a scalar times a matrix with entries in E."""
    mats = np.asarray(mats, dtype=np.int64).reshape(-1, 4)
    nz = np.argmax(mats != 0, axis=1)
    pivot = mats[np.arange(len(mats)), nz]
    scaled = F.mul(mats, F.inv(pivot)[:, None])
    return np.all(_in_subfield(F, E_degree, scaled), axis=1)


def normalize_basis(rhobar, twists=None):
    """Conjugate rhobar so the image lies in Z*GL_2(E) with a regular g0 diagonal."""
    F = rhobar.ring
    pr = rhobar.pseudorep()
    reg = regularity_status(rhobar, twists)
    if not reg.regular:
        raise PreconditionError("normalize_basis needs a regular representation")
    pc = projective_class(rhobar)
    if pc.tag == "S4" and not reg.good:
        raise PreconditionError("octahedral representation is not good")
    d = np.asarray(pr.d)
    k = 1
    cur = d.copy()
    while not np.all(cur == 1):
        cur = F.mul(cur, d)
        k += 1
    if k & (k - 1):
        raise PreconditionError("determinant order is not a power of 2", order=k)
    tw = residual_twists(rhobar) if twists is None else twists
    pi0 = np.zeros(len(rhobar.source), dtype=bool)
    pi0[tw.pi0] = True
    E = reg.E
    G = rhobar.source
    t = np.asarray(pr.t)
    regmask = regular_mask(F, E.degree, t, d)
    gens_img = rhobar.images
    for g0 in np.flatnonzero(regmask):
        g0 = int(g0)
        X0 = rhobar.images[g0]
        if X0[1] == 0 and X0[2] == 0:
            lam, mu, K = int(X0[0]), int(X0[3]), F
        else:
            lam, mu, K = eigenvalues(F, int(t[g0]), int(d[g0]))
        if K is not F:
            continue
        if pc.family == "large" and F.p >= 7 and not (lam < F.p and mu < F.p and
                                                      element_degree(F, lam) == 1 and
                                                      element_degree(F, mu) == 1):
            continue
        power = _pi0_power(G, rhobar, g0, pi0)
        if pc.family in ("exceptional", "large") and power is None:
            continue
        P = _eigenbasis(F, rhobar.images[g0], lam, mu)
        if P is None:
            continue
        Pinv = mat_inv(F, P)
        for a in F.units():
            x = mat_mul(F, np.array([1, 0, 0, int(a)]), Pinv)
            conj = conjugate(F, x, gens_img)
            if np.all(in_Z_GL2_E(F, E.degree, conj)):
                return NormalizedBasis(MatrixRep(G, F, conj), x, g0, lam, mu, power)
    raise PreconditionError("no conjugator found in the searched family")


def _pi0_power(G, rhobar, g0, pi0):
    cur = g0
    for n in range(1, len(G) + 1):
        if pi0[cur] and not is_scalar(rhobar.images[cur]):
            return n
        cur = int(G.mul(cur, g0))
        if cur == g0:
            break
    return None


def _eigenbasis(F, X, lam, mu):
    """Columns v_lam, v_mu as a matrix P with P^-1 X P = diag(lam, mu)."""
    a, b, c, dd = (int(v) for v in X)
    if b == 0 and c == 0 and (a, dd) == (lam, mu):
        return np.array([1, 0, 0, 1], dtype=np.int64)
    cols = []
    for ev in (lam, mu):
        am, dm = int(F.sub(a, ev)), int(F.sub(dd, ev))
        if am or b:
            cols.append((b, int(F.neg(am))))
        elif dm or c:
            cols.append((dm, int(F.neg(c))))
        else:
            cols.append((1, 0))
    P = np.array([cols[0][0], cols[1][0], cols[0][1], cols[1][1]], dtype=np.int64)
    if int(F.sub(F.mul(P[0], P[3]), F.mul(P[1], P[2]))) == 0:
        return None
    return P


# ---------------------------------------------------------------- Pi_0

@dataclass
class Pi0Report:
    kind: str                    # abs_irreducible, mult_free_over_E, neither
    index: int
    criterion_verified: bool = None


def pi0_restriction_report(rhobar, twists=None):
    tw = residual_twists(rhobar) if twists is None else twists
    G = rhobar.source
    F = rhobar.ring
    idx = tw.pi0
    sub_rep = MatrixRep(G.subgroup(idx), F, rhobar.images[idx])
    gens = sub_rep.images[sub_rep.source.gens] if sub_rep.source.gens else sub_rep.images[:1]
    lines, _ = invariant_lines(F, gens)
    index = len(G) // len(idx)
    if not lines:
        kind = "abs_irreducible"
    else:
        pr = sub_rep.pseudorep()
        c = classify_pseudorep(pr, absolute=True)
        if c.reducible and not np.array_equal(c.constituents[0].values, c.constituents[1].values):
            kind = "mult_free_over_E"
        else:
            kind = "neither"
    report = Pi0Report(kind, index)
    pc = projective_class(rhobar)
    if pc.family == "dihedral" and pc.order > 4:
        reg = regularity_status(rhobar, tw)
        if reg.regular:
            report.criterion_verified = _dihedral_criterion(rhobar, tw, reg.E)
    return report


def _dihedral_criterion(rhobar, tw, E):
    """For H the inducing subgroup and chi a constituent on H:
    g in Pi_0 iff chi(g) in E^x, for every g in H."""
    structs = dihedral_structures(rhobar)
    if len(structs) != 1:
        return False
    mask, chi = structs[0]
    K = chi.ring
    G = rhobar.source
    idx = np.flatnonzero(mask)
    in_pi0 = np.zeros(len(G), dtype=bool)
    in_pi0[tw.pi0] = True
    vals = chi.values
    inE = K.pow(vals, K.p ** E.degree) == vals
    return bool(np.array_equal(in_pi0[idx], inE))


# ---------------------------------------------------------------- context for structure checks

def choose_fq(pc, E_degree, F, ratio=None):
    """Degree of F_q: E (or a suitable subfield) in the cyclic and dihedral cases,
    E(ratio) in the exceptional case and F_p when large."""
    if pc.family in ("cyclic", "dihedral"):
        m = pc.order if pc.family == "cyclic" else pc.order // 2
        cands = [E_degree] + [k for k in range(1, F.f + 1) if F.f % k == 0 and k != E_degree]
        for k in cands:
            if gcd(m, F.p ** k - 1) > 2:
                return k
        return F.f
    if pc.family == "exceptional":
        deg = E_degree
        if ratio is not None:
            deg = _lcm(deg, element_degree(F, ratio))
        if F.f % deg:
            raise PreconditionError("E(lambda0/mu0) is not inside the residue field")
        return deg
    return 1


def residual_context(rhobar, lam0, mu0):
    F = rhobar.ring
    pr = rhobar.pseudorep()
    pc = projective_class(rhobar)
    E = compute_E(pr)
    cls = classify_pseudorep(pr)
    ratio = int(F.mul(lam0, F.inv(mu0)))
    q = choose_fq(pc, E.degree, F, ratio)
    return {"projective_class": pc.tag, "family": pc.family, "reducible": cls.reducible,
            "dihedral": pc.family == "dihedral", "exceptional": pc.family == "exceptional",
            "large": pc.family == "large", "E_degree": E.degree, "fq_degree": q}


# ---------------------------------------------------------------- report

def analyze(rhobar):
    """JSON-ready residual report."""
    pc = projective_class(rhobar)
    tw = residual_twists(rhobar)
    reg = regularity_status(rhobar, tw)
    out = {"projective_class": pc.tag}
    if pc.alias:
        out["alias"] = pc.alias
    out["E"] = reg.E.to_json()
    out["regular"] = reg.regular
    out["strongly_regular"] = reg.strongly_regular
    if reg.good is not None:
        out["good"] = reg.good
    out["twists"] = [{"sigma": p.sigma.to_json(),
                      "eta": [int(v) for v in p.eta.values]} for p in tw.pairs]
    out["pi0_index"] = len(rhobar.source) // len(tw.pi0)
    return out
