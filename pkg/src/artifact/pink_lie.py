"""Pink's Lie filtration, congruence subgroups, subrings and level detection.

A trace-zero matrix (a, b; c, -a) is stored as the triple (a, b, c).  An
additive subgroup of such triples is a Z/p^n-module of rank 3D, with the
coordinates of a, b and c in consecutive blocks of D.
"""

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import caps
from .errors import CapExceeded, PreconditionError
from .modules import ZpnModule
from .rep_core import (GroupTable, close_group, identity, mat_det, mat_inv, mat_mul,
                       validate_pseudorep, PseudoRep, _keys)
from .ring_core import (Span, ideal_span, teichmuller_span, subfield_elements,
                        subfield_generator, sqrt_unit_array, make_ring, RingSpec,
                        grading_from_automorphisms, frobenius_power)


# ---------------------------------------------------------------- triples

def theta(R, X):
    """X - tr(X)/2 as a trace-zero matrix."""
    X = np.asarray(X, dtype=np.int64)
    half = pow(2, -1, R.mod)
    a = R.smul(half, R.sub(X[..., 0], X[..., 3]))
    return np.stack([a, X[..., 1], X[..., 2], R.neg(a)], axis=-1)


def theta_triples(R, X):
    T = theta(R, X)
    return T[..., :3]


def triples_to_matrices(R, T):
    T = np.asarray(T, dtype=np.int64)
    return np.stack([T[..., 0], T[..., 1], T[..., 2], R.neg(T[..., 0])], axis=-1)


def bracket(R, X, Y):
    """[x, y] = xy - yx on triples."""
    a, b, c = X[..., 0], X[..., 1], X[..., 2]
    a2, b2, c2 = Y[..., 0], Y[..., 1], Y[..., 2]
    m = R.mul
    diag = R.sub(m(b, c2), m(c, b2))
    upper = R.smul(2, R.sub(m(a, b2), m(b, a2)))
    lower = R.smul(2, R.sub(m(c, a2), m(a, c2)))
    return np.stack([diag, upper, lower], axis=-1)


def _triple_coords(R, T):
    T = np.asarray(T, dtype=np.int64).reshape(-1, 3)
    return R.coords(T).reshape(len(T), 3 * R.D)


def _coords_triple(R, V):
    V = np.asarray(V, dtype=np.int64).reshape(-1, 3, R.D)
    return R.from_coords(V)


class LieSubmodule:
    """An additive subgroup of trace-zero 2x2 matrices over a ring."""

    def __init__(self, ring, module):
        self.ring = ring
        self.module = module

    @classmethod
    def of(cls, ring, triples):
        m = ZpnModule(ring.p, ring.n, 3 * ring.D)
        triples = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
        if len(triples):
            m.add(_triple_coords(ring, triples))
        return cls(ring, m)

    @classmethod
    def from_spans(cls, ring, I, B, C):
        """The module (I B; C I)^0 for additive subgroups I, B, C."""
        rows = []
        for pos, S in enumerate((I, B, C)):
            for v in S.basis():
                t = [0, 0, 0]
                t[pos] = v
                rows.append(t)
        return cls.of(ring, rows)

    @classmethod
    def sl2(cls, ring, ideal):
        return cls.from_spans(ring, ideal, ideal, ideal)

    @property
    def size(self):
        return self.module.size

    def basis(self):
        rows = self.module.rows()
        if not len(rows):
            return np.zeros((0, 3), dtype=np.int64)
        return _coords_triple(self.ring, rows)

    def elements(self, limit=1 << 22):
        return _coords_triple(self.ring, self.module.elements(limit))

    def contains(self, triples):
        return self.module.contains(_triple_coords(self.ring, triples))

    def contains_all(self, triples):
        triples = np.asarray(triples).reshape(-1, 3)
        return bool(len(triples) == 0 or self.contains(triples).all())

    def issubset(self, other):
        return other.contains_all(self.basis())

    def __eq__(self, other):
        return isinstance(other, LieSubmodule) and self.module == other.module

    def __hash__(self):
        return hash(self.module)

    def __add__(self, other):
        return LieSubmodule(self.ring, self.module + other.module)

    def bracket_span(self, other):
        """Additive span of [x, y] for x in self, y in other."""
        X, Y = self.basis(), other.basis()
        if not len(X) or not len(Y):
            return LieSubmodule.of(self.ring, [])
        br = bracket(self.ring, X[:, None, :], Y[None, :, :]).reshape(-1, 3)
        return LieSubmodule.of(self.ring, br)

    def is_bracket_closed(self):
        return self.bracket_span(self).issubset(self)

    def scaled_by_span(self, S):
        """Additive span of s*x for s in S, x in self."""
        X, s = self.basis(), S.basis()
        if not len(X) or not s:
            return LieSubmodule.of(self.ring, [])
        prods = self.ring.mul(np.array(s)[:, None, None], X[None, :, :]).reshape(-1, 3)
        return LieSubmodule.of(self.ring, prods)

    def conjugate_diag(self, a):
        """Image under conjugation by diag(1, a): (x, y, z) -> (x, y/a, a z)."""
        R = self.ring
        X = self.basis()
        if not len(X):
            return LieSubmodule.of(R, [])
        ai = int(R.inv(a))
        Y = np.stack([X[:, 0], R.mul(X[:, 1], ai), R.mul(X[:, 2], a)], axis=-1)
        return LieSubmodule.of(R, Y)

    def coordinate_span(self, positions):
        """Elements supported on the given triple positions, as a module there."""
        D = self.ring.D
        cols = [pos * D + k for pos in positions for k in range(D)]
        return self.module.intersect_coordinates(cols)

    def projection(self, pos):
        D = self.ring.D
        return Span(self.ring, self.module.projected(range(pos * D, (pos + 1) * D)))

    def __repr__(self):
        return f"LieSubmodule(size={self.size})"


# ---------------------------------------------------------------- SR^1 and the filtration

def _default_offdiag(R, B=None, C=None):
    m = R.maximal_ideal()
    return (m if B is None else B), (m if C is None else C)


def in_SR1(R, X, B=None, C=None):
    """Mask of matrices with det 1, diagonal = 1 mod m, off-diagonal in B, C."""
    X = np.asarray(X, dtype=np.int64).reshape(-1, 4)
    Bs, Cs = _default_offdiag(R, B, C)
    ok = mat_det(R, X) == 1
    ok &= R.residue(X[:, 0]) == 1
    ok &= R.residue(X[:, 3]) == 1
    ok &= Bs.contains(X[:, 1])
    ok &= Cs.contains(X[:, 2])
    return ok


def pink_filtration(Gamma, depth, B=None, C=None):
    """[L_1, ..., L_depth] for a finite group Gamma inside SR^1."""
    R = Gamma.ring
    E = Gamma.elements
    ok = in_SR1(R, E, B, C)
    if not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        raise PreconditionError("group is not contained in SR^1", element=bad)
    m = ZpnModule(R.p, R.n, 3 * R.D)
    step = 1 << 14
    for s in range(0, len(E), step):
        m.add(_triple_coords(R, theta_triples(R, E[s:s + step])))
    L1 = LieSubmodule(R, m)
    out = [L1]
    for _ in range(depth - 1):
        out.append(L1.bracket_span(out[-1]))
    return out


def filtration_checks(Ls):
    """Nesting and bracket closure for a computed filtration."""
    nested = all(Ls[i + 1].issubset(Ls[i]) for i in range(len(Ls) - 1))
    closed = all(L.is_bracket_closed() for L in Ls)
    return {"nested": nested, "bracket_closed": closed}


def pink_group_H(L, B=None, C=None):
    """Theta^-1(L) intersected with SR^1, checked to be a group."""
    R = L.ring
    T = L.elements()
    Bs, Cs = _default_offdiag(R, B, C)
    keep = (R.residue(T[:, 0]) == 0) & Bs.contains(T[:, 1]) & Cs.contains(T[:, 2])
    T = T[keep]
    a, b, c = T[:, 0], T[:, 1], T[:, 2]
    disc = R.add(R.add(1, R.mul(a, a)), R.mul(b, c))
    lam = sqrt_unit_array(R, disc)
    X = np.stack([R.add(lam, a), b, c, R.sub(lam, a)], axis=-1)
    ok, witness = subset_is_group(R, X)
    if not ok:
        raise PreconditionError("H(L) is not a group", witness=witness)
    G = GroupTable(R, X)
    return G


def subset_is_group(R, X):
    """Decide whether a finite set of invertible matrices is a group.

    Grows the subgroup generated by members one generator at a time and stops
    as soon as it leaves the set.
    """
    X = np.asarray(X, dtype=np.int64).reshape(-1, 4)
    keys = np.sort(_keys(R, X))
    if not len(keys):
        return False, "empty"
    if not np.any(keys == _keys(R, identity(R))):
        return False, "identity missing"
    gens = []
    sub = None
    sub_keys = np.zeros(0, dtype=np.int64)
    for i in range(len(X)):
        if len(sub_keys) == len(keys):
            break
        k = _keys(R, X[i])
        pos = np.searchsorted(sub_keys, k)
        if pos < len(sub_keys) and sub_keys[pos] == k:
            continue
        gens.append(X[i])
        try:
            sub = close_group(R, np.array(gens), cap=len(keys))
        except CapExceeded:
            return False, "closure larger than the set"
        sub_keys = np.sort(_keys(R, sub.elements))
        pos = np.clip(np.searchsorted(keys, sub_keys), 0, len(keys) - 1)
        if not np.all(keys[pos] == sub_keys):
            return False, "product leaves the set"
    return len(sub_keys) == len(keys), None


# ---------------------------------------------------------------- congruence subgroups

def congruence_subgroup(R, ideal, subring=None):
    """Gamma_S(a) = ker(SL_2(S) -> SL_2(S/a)) for an ideal a of the subring S."""
    S = Span.whole(R) if subring is None else subring
    if not ideal.issubset(S):
        raise PreconditionError("ideal is not inside the subring")
    Ia = ideal.elements()
    full = bool(np.any(R.is_unit(Ia)))
    if not full:
        size = len(Ia) ** 3
        caps.check("group", size, "congruence subgroup")
        a = np.repeat(Ia, len(Ia) ** 2)
        b = np.tile(np.repeat(Ia, len(Ia)), len(Ia))
        c = np.tile(Ia, len(Ia) ** 2)
        d = R.sub(R.mul(R.add(1, R.mul(b, c)), R.inv(R.add(1, a))), 1)
        X = np.stack([R.add(1, a), b, c, R.add(1, d)], axis=-1)
    else:
        Se = S.elements()
        units = Se[R.is_unit(Se)]
        nonunits = Se[~R.is_unit(Se)]
        size = len(units) * len(Se) ** 2 + len(nonunits) * len(units) * len(Se)
        caps.check("group", size, "congruence subgroup")
        # a unit: b, c free, d = (1 + bc)/a
        a = np.repeat(units, len(Se) ** 2)
        b = np.tile(np.repeat(Se, len(Se)), len(units))
        c = np.tile(Se, len(units) * len(Se))
        d = R.mul(R.add(1, R.mul(b, c)), R.inv(a))
        X1 = np.stack([a, b, c, d], axis=-1)
        # a non-unit: b a unit, d free, c = (ad - 1)/b
        a = np.repeat(nonunits, len(units) * len(Se))
        b = np.tile(np.repeat(units, len(Se)), len(nonunits))
        d = np.tile(Se, len(nonunits) * len(units))
        c = R.mul(R.sub(R.mul(a, d), 1), R.inv(b))
        X2 = np.stack([a, b, c, d], axis=-1)
        X = np.concatenate([X1, X2])
    order = np.argsort(_keys(R, X), kind="stable")
    return GroupTable(R, X[order])


# ---------------------------------------------------------------- decomposition

@dataclass
class Decomposition:
    kind: str                  # "none", "decomposable" or "strong"
    I: Span = None
    B: Span = None
    C: Span = None
    nabla: LieSubmodule = None
    witness: tuple = None

    @property
    def decomposable(self):
        return self.kind != "none"

    @property
    def strong(self):
        return self.kind == "strong"


def decompose_lie(L):
    """Decomposability flags and the components I, B, C and nabla."""
    R = L.ring
    X = L.basis()
    zero = np.zeros(len(X), dtype=np.int64)
    diag = np.stack([X[:, 0], zero, zero], axis=-1) if len(X) else X
    anti = np.stack([zero, X[:, 1], X[:, 2]], axis=-1) if len(X) else X
    for part in (diag, anti):
        if len(part):
            ok = L.contains(part)
            if not ok.all():
                i = int(np.flatnonzero(~ok)[0])
                return Decomposition("none", witness=tuple(int(v) for v in X[i]))
    I = Span(R, L.coordinate_span([0]))
    nab_mod = L.coordinate_span([1, 2])
    nabla_full = ZpnModule(R.p, R.n, 3 * R.D)
    if nab_mod.rows().size:
        nabla_full.add(np.concatenate([np.zeros((len(nab_mod.rows()), R.D), dtype=np.int64),
                                       nab_mod.rows()], axis=1))
    nabla = LieSubmodule(R, nabla_full)
    B = nabla.projection(1)
    C = nabla.projection(2)
    upper = np.stack([zero, X[:, 1], zero], axis=-1) if len(X) else X
    lower = np.stack([zero, zero, X[:, 2]], axis=-1) if len(X) else X
    strong = all(L.contains_all(part) for part in (upper, lower))
    return Decomposition("strong" if strong else "decomposable", I, B, C, nabla)


# ---------------------------------------------------------------- subrings

class Subring(Span):
    """A span closed under multiplication, remembering its generators."""

    def __init__(self, ring, module, gens=()):
        super().__init__(ring, module)
        self.gens = [int(g) for g in gens]

    def contains_one(self):
        return bool(self.contains([1])[0])

    def units(self):
        e = self.elements()
        return e[self.ring.is_unit(e)]


def span_times(S, T):
    return S.times(T)


def base_span(R, base="prime", degree=None):
    """Z/p^n, W(E) for the subfield of the given degree, or W(F)."""
    if base == "prime":
        return Span.of(R, [1])
    if base == "W(F)":
        return teichmuller_span(R)
    if base == "W(E)":
        if degree is None:
            raise PreconditionError("W(E) base needs the subfield degree")
        return teichmuller_span(R, subfield_elements(R.residue_field, degree))
    raise PreconditionError(f"unknown base {base!r}")


def close_under_products(S):
    while True:
        bigger = S + S.times(S)
        if bigger.size == S.size:
            return S
        S = bigger


def generated_subring(R, gens, base="prime", degree=None):
    """Smallest subring containing the base and the generators."""
    S = base_span(R, base, degree) + Span.of(R, list(gens))
    S = close_under_products(S)
    return Subring(R, S.module, gens)


def multiplier_ring(L):
    """{a in A : a L is contained in L}, by a kernel computation."""
    R = L.ring
    D = R.D
    X = L.basis()
    m = len(X)
    if m == 0:
        return Subring(R, Span.whole(R).module)
    width = D + 3 * D * m
    rows = []
    basis = R._powers
    for e in basis:
        prods = R.mul(int(e), X)                      # (m, 3)
        rows.append(np.concatenate([R.coords(int(e)), _triple_coords(R, prods).ravel()]))
    Lrows = L.module.rows()
    for j in range(m):
        for r in Lrows:
            v = np.zeros(width, dtype=np.int64)
            v[D + 3 * D * j: D + 3 * D * (j + 1)] = r
            rows.append(v)
    M = ZpnModule(R.p, R.n, width, np.array(rows))
    return Subring(R, M.intersect_coordinates(range(D)))


def ideals_of(S, limit=1 << 12):
    """Every ideal of the subring S: principal ideals first, then their joins."""
    R = S.ring
    elems = S.elements()
    found = {}

    def key(sp):
        return tuple(sorted(int(v) for v in sp.elements()))

    principal = []
    for x in elems:
        I = S.times(Span.of(R, [int(x)]))
        k = key(I)
        if k not in found:
            found[k] = (I, [int(x)])
            principal.append(k)
    frontier = list(found)
    while frontier:
        new = []
        for k in frontier:
            I, g = found[k]
            for pk in principal:
                P, pg = found[pk]
                J = I + P
                kj = key(J)
                if kj not in found:
                    found[kj] = (J, g + pg)
                    new.append(kj)
                    if len(found) > limit:
                        raise CapExceeded("too many ideals", limit=limit)
        frontier = new
    out = list(found.values())
    out.sort(key=lambda t: (-t[0].size, tuple(sorted(int(v) for v in t[0].elements()))))
    return out


def minimal_generators(S, ideal, gens):
    """Drop redundant generators of an ideal of S."""
    R = S.ring
    gens = list(gens)
    i = 0
    while i < len(gens):
        rest = gens[:i] + gens[i + 1:]
        J = S.times(Span.of(R, rest)) if rest else Span.of(R, [])
        if J.size == ideal.size:
            gens = rest
        else:
            i += 1
    return gens


@dataclass
class LevelResult:
    ideal: Span
    generators: list
    conjugator: np.ndarray
    subring: Subring
    covers_checked: int = 0
    tried: list = field(default_factory=list)


def default_conjugators(R):
    return [np.array([1, 0, 0, int(a)], dtype=np.int64) for a in R.units() if int(a) != 1]


def level_detector(G, subring=None, conjugators=None):
    """Largest ideal a of the subring with Gamma(a) inside x G x^-1 for a listed x."""
    R = G.ring
    S = Subring(R, Span.whole(R).module) if subring is None else subring
    xs = [identity(R)]
    extra = default_conjugators(R) if conjugators is None else [np.asarray(x) for x in conjugators]
    xs += [x for x in extra if not np.array_equal(x, identity(R))]
    ideals = ideals_of(S)
    failed = 0
    for ideal, gens in ideals:
        proper = not np.any(R.is_unit(ideal.elements()))
        if proper and ideal.size ** 3 > len(G):
            failed += 1
            continue
        try:
            Gam = congruence_subgroup(R, ideal, S)
        except CapExceeded:
            failed += 1
            continue
        if len(Gam) > len(G):
            failed += 1
            continue
        for x in xs:
            xi = mat_inv(R, x)
            conj = mat_mul(R, mat_mul(R, xi[None, :], Gam.elements), x[None, :])
            if np.all(G.contains(conj)):
                gens = minimal_generators(S, ideal, gens) if ideal.size > 1 else []
                return LevelResult(ideal, gens, x, S, failed)
        failed += 1
    raise AssertionError("the zero ideal always qualifies")


# ---------------------------------------------------------------- J-smallness

@dataclass
class SmallnessResult:
    small: bool
    kernel_size: int
    witness: tuple = None         # (m_0, ..., m_{r-1}) with sum s(alpha)^i m_i = 0
    alpha: int = None


def j_smallness(R, J, deg1, deg2):
    """Is W(L1) (x)_{W(L2)} W(L2)J -> W(L1)J injective?  Degrees over F_p."""
    F = R.residue_field
    if deg1 % deg2 or F.f % deg1:
        raise PreconditionError("need L2 inside L1 inside F", deg1=deg1, deg2=deg2)
    W2 = base_span(R, "W(E)", deg2)
    M = W2.times(J) if J.basis() else Span.of(R, [])
    r = deg1 // deg2
    alpha = subfield_generator(F, deg1)
    s_alpha = int(R.teich(alpha))
    if not M.basis() or r == 1:
        return SmallnessResult(True, 1, None, s_alpha)
    D = R.D
    width = D + r * D
    rows = []
    pw = [1]
    for _ in range(1, r):
        pw.append(int(R.mul(pw[-1], s_alpha)))
    Mrows = M.module.rows()
    for i in range(r):
        for v in Mrows:
            elem = int(R.from_coords(v))
            row = np.zeros(width, dtype=np.int64)
            row[:D] = R.coords(int(R.mul(pw[i], elem)))
            row[D + i * D: D + (i + 1) * D] = v
            rows.append(row)
    graph = ZpnModule(R.p, R.n, width, np.array(rows))
    kernel = graph.tail(D)
    ksize = kernel.size
    if ksize == 1:
        return SmallnessResult(True, 1, None, s_alpha)
    v = kernel.rows()[0][D:]
    parts = tuple(int(R.from_coords(v[i * D:(i + 1) * D])) for i in range(r))
    return SmallnessResult(False, ksize, parts, s_alpha)


# ---------------------------------------------------------------- structure check

@dataclass
class ClauseResult:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)


@dataclass
class StructureReport:
    clauses: list
    I1: Span = None
    B1: Span = None
    C1: Span = None
    fq_degree: int = None
    conjugator: int = 1

    @property
    def ok(self):
        return all(c.ok for c in self.clauses)

    def clause(self, name):
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self):
        return {c.name: {"ok": c.ok, **{k: v for k, v in c.detail.items()}} for c in self.clauses}


def offdiagonal_ideals(rho):
    """Ideals B, C generated by the upper-right and lower-left entries of the image,
    and their radical parts (B itself when B*C lies in m, otherwise m*B)."""
    R = rho.ring
    X = rho.images
    B = ideal_span(R, np.unique(X[:, 1]))
    C = ideal_span(R, np.unique(X[:, 2]))
    m = R.maximal_ideal()
    if B.times(C).issubset(m):
        return B, C, B, C
    return B, C, m.times(B), m.times(C)


def check_admissible(rho):
    """Finite-scale admissibility clauses (2)-(5); returns {clause: (ok, detail)}."""
    from .rep_core import classify_pseudorep
    R = rho.ring
    F = R.residue_field
    pr = rho.pseudorep()
    out = {}
    cls = classify_pseudorep(pr.reduce())
    mult_free = True
    if cls.reducible:
        a, b = cls.constituents
        mult_free = not np.array_equal(a.values, b.values)
    out[2] = (mult_free, {})
    v = validate_pseudorep(pr)
    out[3] = (v.ok, {"axiom": v.axiom})
    d = np.asarray(pr.d)
    teich = R.teich(R.residue(d))
    bad = np.flatnonzero(teich != d)
    out[4] = (not len(bad), {"element": int(bad[0])} if len(bad) else {})
    S = generated_subring(R, np.unique(pr.t), base="W(F)")
    out[5] = (S.size == R.size, {"subring_size": S.size})
    return out


def _wq_span(R, q_degree, S):
    return base_span(R, "W(E)", q_degree).times(S) if S.basis() else Span.of(R, [])


def bellaiche_structure_check(rho, g0, lam0, mu0, fq_degree=None, kernel_trivial=True,
                              E_degree=None):
    """Itemized check of the structure clauses for a matrix representation.

    g0 indexes the source group; rho(g0) must be diag(s(lam0), s(mu0)).
    """
    from .residual_analysis import residual_context
    R = rho.ring
    F = R.residue_field
    adm = check_admissible(rho)
    for clause, (ok, detail) in sorted(adm.items()):
        if not ok:
            raise PreconditionError(f"admissibility clause ({clause}) fails", clause=clause, **detail)
    target = np.array([int(R.teich(lam0)), 0, 0, int(R.teich(mu0))])
    if not np.array_equal(rho.images[g0], target):
        raise PreconditionError("rho(g0) is not diag(s(lambda0), s(mu0))")
    ctx = residual_context(rho.reduce(), lam0, mu0)
    q = ctx["fq_degree"] if fq_degree is None else fq_degree
    E_deg = ctx["E_degree"] if E_degree is None else E_degree
    B, C, Brad, Crad = offdiagonal_ideals(rho)
    G = rho.image_group()
    mask = in_SR1(R, G.elements, Brad, Crad)
    Gamma = G.subgroup(np.flatnonzero(mask))
    L1 = pink_filtration(Gamma, 1, Brad, Crad)[0]
    dec = decompose_lie(L1)
    clauses = [ClauseResult("1", dec.decomposable,
                            {} if dec.decomposable else {"element": list(dec.witness)})]
    if not dec.decomposable:
        return StructureReport(clauses, fq_degree=q)
    I1, B1, C1 = dec.I, dec.B, dec.C
    WF = teichmuller_span(R)
    A_expected = WF + WF.times(I1) + WF.times(I1.times(I1)) if I1.basis() else WF
    if ctx["dihedral"] and B1.basis():
        A_expected = A_expected + WF.times(B1)
    clauses.append(ClauseResult("2", A_expected.size == R.size,
                                {"span_size": A_expected.size, "ring_size": R.size}))
    WB = WF.times(B1) if B1.basis() else Span.of(R, [])
    WC = WF.times(C1) if C1.basis() else Span.of(R, [])
    clauses.append(ClauseResult("3", WB == Brad and WC == Crad,
                                {"B": WB == Brad, "C": WC == Crad}))
    # clause 4, trying diag(1, a) conjugates in the exceptional and large cases
    candidates = [1]
    if ctx["exceptional"] or ctx["large"]:
        candidates += [int(a) for a in R.units() if int(a) != 1]
    chosen = None
    for a in candidates:
        La = L1 if a == 1 else L1.conjugate_diag(a)
        Ia, Ba, Ca = I1, (B1 if a == 1 else _scale_span(B1, int(R.inv(a)))), (C1 if a == 1 else _scale_span(C1, a))
        Wq = base_span(R, "W(E)", q)
        lhs = La.scaled_by_span(Wq)
        rhs = LieSubmodule.from_spans(R, _wq_span(R, q, Ia), _wq_span(R, q, Ba), _wq_span(R, q, Ca))
        if lhs == rhs:
            chosen = (a, Ia, Ba, Ca)
            break
    clauses.append(ClauseResult("4", chosen is not None,
                                {"conjugator": chosen[0] if chosen else None}))
    a, Ia, Ba, Ca = chosen if chosen else (1, I1, B1, C1)
    WqI = _wq_span(R, q, Ia)
    WqB = _wq_span(R, q, Ba)
    WqC = _wq_span(R, q, Ca)
    cube = WqI.times(WqI).times(WqI) if WqI.basis() else WqI
    clauses.append(ClauseResult("i", cube.issubset(WqI)))
    if not ctx["reducible"]:
        clauses.append(ClauseResult("ii", WqC == WqB))
    if ctx["exceptional"] or ctx["large"]:
        sq = WqI.times(WqI) if WqI.basis() else WqI
        clauses.append(ClauseResult("iii", WqB == WqI and sq.issubset(WqI)))
    # graded decomposition when J is small over F/E
    WE = base_span(R, "W(E)", E_deg)
    J = _j_span(R, WE, I1, B1, ctx["dihedral"] and kernel_trivial)
    sm = j_smallness(R, J, F.f, E_deg)
    if sm.small:
        ok, detail = graded_decomposition(R, J, E_deg)
        clauses.append(ClauseResult("graded", ok, detail))
    return StructureReport(clauses, I1, B1, C1, q, a)


def _scale_span(S, a):
    b = S.basis()
    if not b:
        return S
    return Span.of(S.ring, S.ring.mul(np.array(b), a))


def _j_span(R, WE, I1, B1, with_B):
    J = Span.of(R, [])
    if I1.basis():
        J = WE.times(I1) + WE.times(I1.times(I1))
    if with_B and B1.basis():
        J = J + WE.times(B1)
    return J


def j_span(R, I1, B1=None, E_degree=1, with_B=False):
    """J = W(E)I_1 + W(E)I_1^2, plus W(E)B_1 when requested."""
    WE = base_span(R, "W(E)", E_degree)
    return _j_span(R, WE, I1, B1 if B1 is not None else Span.of(R, []), with_B)


def graded_decomposition(R, J, sub_degree):
    """Check frakA = W + WJ is the direct sum of W^phi + W^phi J over characters
    phi of Gal(F/F'), F' the subfield of the given degree."""
    F = R.residue_field
    k = F.f // sub_degree
    W = make_ring(RingSpec(R.p, R.n, R.f))
    X = [frobenius_power(W, sub_degree * j) for j in range(k)]
    grading = grading_from_automorphisms(W, X)

    def to_R(span):
        basis = span.basis()
        if not basis:
            return Span.of(R, [])
        coords = W.coords(np.array(basis))
        pad = np.zeros((len(coords), R.D - W.D), dtype=np.int64)
        return Span.of(R, R.from_coords(np.concatenate([coords, pad], axis=1)))

    WR = teichmuller_span(R)
    frakA = WR + WR.times(J) if J.basis() else WR
    parts = []
    for comp in grading.components:
        Wphi = to_R(comp)
        part = Wphi + Wphi.times(J) if (J.basis() and Wphi.basis()) else Wphi
        parts.append(part)
    total = Span.of(R, [])
    for part in parts:
        total = total + part
    logs = sum(pt.module.log_size for pt in parts)
    ok = total == frakA and logs == frakA.module.log_size
    return ok, {"components": len(parts), "component_log_sizes": [pt.module.log_size for pt in parts],
                "total_log_size": frakA.module.log_size}
