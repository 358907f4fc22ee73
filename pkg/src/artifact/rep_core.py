"""Finite matrix groups over local rings, pseudorepresentations and twists.

A 2x2 matrix is a length-4 integer array (a, b, c, d) of ring elements,
row-major.  Batches are arrays of shape (N, 4).
"""

from dataclasses import dataclass

import numpy as np

from . import caps
from .abelian import characters as _abelian_characters
from .abelian import element_orders as _abelian_orders
from .errors import CapExceeded, InputError, PreconditionError
from .ring_core import embed, quadratic_extension, sqrt_unit

KEY_LIMIT = 55108      # ring size for which a 4-entry key fits in int64


# ---------------------------------------------------------------- matrices

def mat(R, rows):
    """Matrix from [[a, b], [c, d]] or a flat 4-list of ring elements."""
    flat = np.asarray(rows, dtype=np.int64).reshape(-1)
    if flat.shape != (4,):
        raise InputError("a matrix needs four entries")
    if R.D == 1:
        return flat % R.mod
    if np.any(np.abs(flat) >= R.size):
        raise InputError("matrix entry is not a ring element code")
    return np.where(flat < 0, R.neg(np.abs(flat)), flat)


def identity(R):
    return np.array([1, 0, 0, 1], dtype=np.int64)


def scalar(R, a):
    return np.array([a, 0, 0, a], dtype=np.int64)


def diag(R, a, d):
    return np.array([a, 0, 0, d], dtype=np.int64)


def mat_mul(R, X, Y):
    X, Y = np.asarray(X), np.asarray(Y)
    a, b, c, d = X[..., 0], X[..., 1], X[..., 2], X[..., 3]
    e, f, g, h = Y[..., 0], Y[..., 1], Y[..., 2], Y[..., 3]
    m = R.mul
    return np.stack([R.add(m(a, e), m(b, g)), R.add(m(a, f), m(b, h)),
                     R.add(m(c, e), m(d, g)), R.add(m(c, f), m(d, h))], axis=-1)


def mat_det(R, X):
    X = np.asarray(X)
    return R.sub(R.mul(X[..., 0], X[..., 3]), R.mul(X[..., 1], X[..., 2]))


def mat_trace(R, X):
    X = np.asarray(X)
    return R.add(X[..., 0], X[..., 3])


def mat_inv(R, X):
    X = np.asarray(X)
    di = R.inv(mat_det(R, X))
    return np.stack([R.mul(di, X[..., 3]), R.mul(di, R.neg(X[..., 1])),
                     R.mul(di, R.neg(X[..., 2])), R.mul(di, X[..., 0])], axis=-1)


def mat_scale(R, s, X):
    X = np.asarray(X)
    s = np.asarray(s)[..., None]
    return R.mul(s, X)


def conjugate(R, x, X):
    """x X x^-1."""
    return mat_mul(R, mat_mul(R, x, X), mat_inv(R, x))


def commutator(R, X, Y):
    """X^-1 Y^-1 X Y."""
    return mat_mul(R, mat_mul(R, mat_inv(R, X), mat_inv(R, Y)), mat_mul(R, X, Y))


def mat_reduce(R, F, X):
    """Entrywise residue map to the residue field."""
    return R.residue(np.asarray(X))


def is_scalar(X):
    X = np.asarray(X)
    return (X[..., 1] == 0) & (X[..., 2] == 0) & (X[..., 0] == X[..., 3])


def mat_to_json(R, X):
    return [R.to_list(int(v)) for v in np.asarray(X).reshape(4)]


def mat_from_json(R, obj):
    if isinstance(obj, list) and len(obj) == 2 and all(isinstance(r, list) and len(r) == 2 for r in obj) \
            and not all(isinstance(v, list) for r in obj for v in r):
        obj = [obj[0][0], obj[0][1], obj[1][0], obj[1][1]]
    if not isinstance(obj, list) or len(obj) != 4:
        raise InputError("a matrix is a list of four ring elements (row-major)")
    return np.array([R.parse_elem(v) for v in obj], dtype=np.int64)


# ---------------------------------------------------------------- groups

def _keys(R, M):
    M = np.asarray(M, dtype=np.int64)
    S = R.size
    return ((M[..., 0] * S + M[..., 1]) * S + M[..., 2]) * S + M[..., 3]


class GroupTable:
    """A finite subgroup of GL_2(R) with elements in canonical BFS order."""

    def __init__(self, ring, elements, gens=None):
        self.ring = ring
        self.elements = np.asarray(elements, dtype=np.int64).reshape(-1, 4)
        self._gens = None if gens is None else [int(g) for g in gens]
        keys = _keys(ring, self.elements)
        self._order = np.argsort(keys, kind="stable")
        self._sorted = keys[self._order]
        self._table = None
        self._inv = None

    def __len__(self):
        return len(self.elements)

    @property
    def gens(self):
        """Generator indices; computed greedily when not supplied."""
        if self._gens is None:
            self._gens = generating_set(self, np.arange(len(self)))
        return self._gens

    @gens.setter
    def gens(self, value):
        self._gens = [int(g) for g in value]

    def keys(self):
        return self._sorted

    @property
    def order(self):
        return len(self.elements)

    def index(self, mats, missing="raise"):
        keys = _keys(self.ring, mats)
        pos = np.searchsorted(self._sorted, keys)
        pos = np.clip(pos, 0, len(self._sorted) - 1)
        found = self._sorted[pos] == keys
        idx = np.where(found, self._order[pos], -1)
        if missing == "raise" and not np.all(found):
            raise PreconditionError("matrix is not in the group")
        return idx

    def contains(self, mats):
        return self.index(mats, missing="ignore") >= 0

    def mul(self, i, j):
        if self._table is not None:
            return self._table[i, j]
        return self.index(mat_mul(self.ring, self.elements[i], self.elements[j]))

    def inv(self, i):
        if self._inv is None:
            self._inv = self.index(mat_inv(self.ring, self.elements))
        return self._inv[i]

    def table(self):
        """Full multiplication table (only for small groups)."""
        if self._table is None:
            N = len(self)
            if N * N > (1 << 26):
                raise CapExceeded("group too large for a full multiplication table", order=N)
            T = np.zeros((N, N), dtype=np.int64)
            step = max(1, (1 << 20) // N)
            for s in range(0, N, step):
                T[s:s + step] = self.index(mat_mul(self.ring, self.elements[s:s + step, None, :],
                                                   self.elements[None, :, :]))
            self._table = T
        return self._table

    def identity_index(self):
        return int(self.index(identity(self.ring)[None])[0])

    def orders(self):
        """Order of every element."""
        N = len(self)
        out = np.zeros(N, dtype=np.int64)
        cur = np.arange(N)
        e = self.identity_index()
        k = 1
        while (out == 0).any():
            hit = (cur == e) & (out == 0)
            out[hit] = k
            cur = self.mul(cur, np.arange(N))
            k += 1
        return out

    # -- subgroups -------------------------------------------------
    def closure(self, gen_idx, start=None):
        """Indices of the subgroup generated by gen_idx, in BFS order."""
        gen_idx = [int(g) for g in gen_idx]
        e = self.identity_index()
        if start is None:
            elems = [e]
        else:
            elems = [int(v) for v in start]
        member = np.zeros(len(self), dtype=bool)
        member[elems] = True
        frontier = np.array(elems, dtype=np.int64)
        if not gen_idx:
            return np.array(elems, dtype=np.int64)
        gens = np.array(gen_idx, dtype=np.int64)
        while len(frontier):
            prod = self.mul(frontier[:, None], gens[None, :]).ravel()
            _, first = np.unique(prod, return_index=True)
            cand = prod[np.sort(first)]
            new = cand[~member[cand]]
            member[new] = True
            elems.extend(new.tolist())
            frontier = new
        return np.array(elems, dtype=np.int64)

    def normal_closure(self, gen_idx, within=None):
        """Normal closure of gen_idx under conjugation by the generators of `within`."""
        conj_by = self.gens if within is None else list(within)
        gens = list(dict.fromkeys(int(g) for g in gen_idx))
        K = self.closure(gens)
        member = np.zeros(len(self), dtype=bool)
        member[K] = True
        cb = np.array(conj_by, dtype=np.int64)
        while True:
            gk = np.array(gens, dtype=np.int64)
            conj = self.mul(self.mul(self.inv(cb)[:, None], gk[None, :]), cb[:, None]).ravel()
            out = conj[~member[conj]]
            if not len(out):
                return K
            gens.append(int(out[0]))
            K = self.closure(gens, start=K)
            member[K] = True

    def commutator_subgroup(self, A_gens, B_gens, normal_in=None):
        """Normal closure (in the whole group) of [a, b] for generators a, b."""
        A = np.array(A_gens, dtype=np.int64)
        B = np.array(B_gens, dtype=np.int64)
        if not len(A) or not len(B):
            return np.array([self.identity_index()])
        ai, bi = self.inv(A), self.inv(B)
        c = self.mul(self.mul(ai[:, None], bi[None, :]), self.mul(A[:, None], B[None, :])).ravel()
        return self.normal_closure(np.unique(c), within=normal_in)

    def derived_subgroup(self):
        return self.commutator_subgroup(self.gens, self.gens)

    def lower_central_series(self, depth):
        """[Gamma_1, ..., Gamma_depth] as index arrays, Gamma_{n+1} = [Gamma, Gamma_n]."""
        out = [np.arange(len(self))]
        gens_n = list(self.gens)
        for _ in range(depth - 1):
            K = self.commutator_subgroup(self.gens, gens_n)
            out.append(K)
            gens_n = generating_set(self, K)
        return out

    def subgroup(self, idx):
        """A new GroupTable for the subgroup with these element indices."""
        idx = np.asarray(idx, dtype=np.int64)
        gens = generating_set(self, idx)
        pos = {int(v): i for i, v in enumerate(idx)}
        return GroupTable(self.ring, self.elements[idx], [pos[g] for g in gens])

    def cosets(self, K):
        """Coset label of every element for a normal subgroup K (index array)."""
        N = len(self)
        labels = np.full(N, -1, dtype=np.int64)
        K = np.asarray(K, dtype=np.int64)
        reps = []
        lab = 0
        for g in range(N):
            if labels[g] >= 0:
                continue
            coset = self.mul(np.full(len(K), g), K)
            labels[coset] = lab
            reps.append(g)
            lab += 1
        return labels, np.array(reps, dtype=np.int64)

    def abelianization(self):
        """(labels, table, identity label) of G/[G,G]."""
        if getattr(self, "_ab", None) is None:
            D = self.derived_subgroup()
            labels, reps = self.cosets(D)
            m = len(reps)
            prod = self.mul(reps[:, None], reps[None, :])
            table = labels[prod]
            self._ab = (labels, table, int(labels[self.identity_index()]))
        return self._ab

    def character_table(self, R):
        """(labels, values): every character G -> R^x as a row of values on the
        abelianization, with labels mapping group elements to its classes."""
        labels, table, ident = self.abelianization()
        chars = _abelian_characters(table, ident, R.roots_of_one, R.mul, 1)
        rows = np.array(chars, dtype=np.int64).reshape(len(chars), len(table))
        rows = rows[np.lexsort(rows.T[::-1])]
        return labels, rows

    def characters(self, R):
        """All characters G -> R^x as value arrays over G (deterministic order)."""
        labels, rows = self.character_table(R)
        return [Character(self, R, row[labels]) for row in rows]

    def index2_subgroups(self):
        """Masks of all index-2 subgroups."""
        labels, table, ident = self.abelianization()
        m = len(table)
        out = []
        if m % 2:
            return out
        orders = _abelian_orders(table, ident)

        def roots(k):
            return np.array([1, 2] if k % 2 == 0 else [1])   # values in {+1, -1} coded 1/2

        def mul(a, b):
            a, b = np.asarray(a), np.asarray(b)
            return np.where(a == b, 1, 2)
        for c in _abelian_characters(table, ident, roots, mul, 1):
            if (c == 2).any():
                out.append((c[labels] == 1))
        out.sort(key=lambda mask: mask.tobytes())
        return out


def generating_set(G, idx):
    """Greedy generating set of the subgroup with element indices idx."""
    idx = np.asarray(idx, dtype=np.int64)
    member = np.zeros(len(G), dtype=bool)
    e = G.identity_index()
    member[e] = True
    sub = np.array([e])
    gens = []
    target = len(idx)
    for g in idx:
        if len(sub) == target:
            break
        if not member[g]:
            gens.append(int(g))
            sub = G.closure(gens, start=sub)
            member[sub] = True
    return gens


def close_group(R, gens, cap=None):
    """Breadth-first closure of the generators under right multiplication."""
    if R.size > KEY_LIMIT:
        raise CapExceeded("ring too large for group enumeration", ring_size=R.size)
    cap = caps.get("group") if cap is None else cap
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, 4)
    if len(gens) and not np.all(R.is_unit(mat_det(R, gens))):
        raise PreconditionError("generator is not invertible")
    I = identity(R)
    elems = [I]
    seen = {int(_keys(R, I))}
    frontier = I[None, :]
    gen_idx = []
    gkeys = _keys(R, gens) if len(gens) else np.zeros(0, dtype=np.int64)
    while len(frontier) and len(gens):
        prod = mat_mul(R, frontier[:, None, :], gens[None, :, :]).reshape(-1, 4)
        keys = _keys(R, prod)
        newrows = []
        for k, row in zip(keys.tolist(), range(len(prod))):
            if k not in seen:
                seen.add(k)
                newrows.append(row)
        frontier = prod[newrows]
        elems.extend(frontier)
        if len(elems) > cap:
            raise CapExceeded("group closure exceeds cap", cap=cap)
    elems = np.array(elems, dtype=np.int64).reshape(-1, 4)
    G = GroupTable(R, elems, [])
    G.gens = [int(i) for i in G.index(gens)] if len(gens) else []
    return G


# ---------------------------------------------------------------- characters

class Character:
    def __init__(self, group, ring, values):
        self.group = group
        self.ring = ring
        self.values = np.asarray(values, dtype=np.int64)

    def __mul__(self, other):
        return Character(self.group, self.ring, self.ring.mul(self.values, other.values))

    def inverse(self):
        return Character(self.group, self.ring, self.ring.inv(self.values))

    def __pow__(self, k):
        return Character(self.group, self.ring, self.ring.pow(self.values, k))

    def is_trivial(self):
        return bool(np.all(self.values == 1))

    def order(self):
        k = 1
        cur = self.values
        while not np.all(cur == 1):
            cur = self.ring.mul(cur, self.values)
            k += 1
        return k

    def kernel(self):
        return np.flatnonzero(self.values == 1)

    def key(self):
        return self.values.tobytes()

    def __eq__(self, other):
        return isinstance(other, Character) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.key())

    def is_multiplicative(self):
        G = self.group
        gens = np.array(G.gens, dtype=np.int64)
        allg = np.arange(len(G))
        if not len(gens):
            return bool(np.all(self.values == 1))
        prod = G.mul(allg[:, None], gens[None, :])
        lhs = self.values[prod]
        rhs = self.ring.mul(self.values[:, None], self.values[gens][None, :])
        return bool(np.array_equal(lhs, rhs)) and int(self.values[G.identity_index()]) == 1

    def __repr__(self):
        return f"Character(order={self.order()})"


def trivial_character(G, R):
    return Character(G, R, np.ones(len(G), dtype=np.int64))


# ---------------------------------------------------------------- representations

class MatrixRep:
    """A homomorphism from a finite matrix group (the source) to GL_2(ring)."""

    def __init__(self, source, ring, images):
        self.source = source
        self.ring = ring
        self.images = np.asarray(images, dtype=np.int64).reshape(-1, 4)

    @classmethod
    def from_image(cls, G):
        return cls(G, G.ring, G.elements)

    @classmethod
    def from_generators(cls, R, gens):
        return cls.from_image(close_group(R, gens))

    def image_group(self):
        return close_group(self.ring, self.images[self.source.gens])

    def trace(self):
        return mat_trace(self.ring, self.images)

    def det(self):
        return mat_det(self.ring, self.images)

    def pseudorep(self):
        return PseudoRep(self.source, self.ring, self.trace(), self.det())

    def is_homomorphism(self):
        G = self.source
        allg = np.arange(len(G))
        gens = np.array(G.gens, dtype=np.int64)
        if not len(gens):
            return bool(np.all(self.images == identity(self.ring)))
        prod = G.mul(allg[:, None], gens[None, :])
        lhs = self.images[prod]
        rhs = mat_mul(self.ring, self.images[:, None, :], self.images[gens][None, :, :])
        return bool(np.array_equal(lhs, rhs))

    def twist(self, chi):
        return MatrixRep(self.source, self.ring, mat_scale(self.ring, chi.values, self.images))

    def reduce(self):
        F = self.ring.residue_field
        return MatrixRep(self.source, F, self.ring.residue(self.images))

    def conjugate(self, x):
        return MatrixRep(self.source, self.ring, conjugate(self.ring, x, self.images))

    def restrict(self, mask_or_idx):
        idx = np.asarray(mask_or_idx)
        if idx.dtype == bool:
            idx = np.flatnonzero(idx)
        H = self.source.subgroup(idx)
        return MatrixRep(H, self.ring, self.images[idx])


@dataclass
class PseudoRep:
    group: GroupTable
    ring: object
    t: np.ndarray
    d: np.ndarray

    def reduce(self):
        R = self.ring
        return PseudoRep(self.group, R.residue_field, R.residue(self.t), R.residue(self.d))


@dataclass
class Verdict:
    ok: bool
    axiom: int = 0
    witness: tuple = ()
    message: str = ""


def validate_pseudorep(pr):
    """Check the four pseudorepresentation axioms on all pairs (g, h)."""
    G, R, t, d = pr.group, pr.ring, np.asarray(pr.t), np.asarray(pr.d)
    N = len(G)
    inv = G.inv(np.arange(N))
    e = G.identity_index()
    if not np.all(R.is_unit(d)):
        g = int(np.flatnonzero(~R.is_unit(d))[0])
        return Verdict(False, 1, (g, e), "d takes a non-unit value")
    failures = {}
    step = max(1, (1 << 18) // max(N, 1))
    allh = np.arange(N)
    for s in range(0, N, step):
        gs = np.arange(s, min(N, s + step))
        gh = G.mul(gs[:, None], allh[None, :])
        hg = G.mul(allh[None, :], gs[:, None])
        # axiom 1
        bad = d[gh] != R.mul(d[gs][:, None], d[allh][None, :])
        _note(failures, 1, bad, gs)
        # axiom 2
        bad = t[gh] != t[hg]
        _note(failures, 2, bad, gs)
        # axiom 4
        ghinv = G.mul(gs[:, None], inv[None, :])
        lhs = R.add(t[gh], R.mul(d[allh][None, :], t[ghinv]))
        rhs = R.mul(t[gs][:, None], t[allh][None, :])
        _note(failures, 4, lhs != rhs, gs)
    if int(t[e]) != 2:
        failures.setdefault(3, (e, e))
    if not failures:
        return Verdict(True)
    ax = min(failures)
    names = {1: "d is not multiplicative", 2: "t is not central",
             3: "t(1) != 2", 4: "t(gh) + d(h)t(gh^-1) != t(g)t(h)"}
    return Verdict(False, ax, failures[ax], names[ax])


def _note(failures, ax, bad, gs):
    if ax in failures or not bad.any():
        return
    i, j = np.argwhere(bad)[0]
    failures[ax] = (int(gs[i]), int(j))


def twist_pseudorep(pr, chi):
    R = pr.ring
    return PseudoRep(pr.group, R, R.mul(chi.values, pr.t), R.mul(R.mul(chi.values, chi.values), pr.d))


@dataclass
class Classification:
    reducible: bool
    dihedral: bool
    a_priori_small: bool
    teichmuller_trace: bool
    constituents: tuple = ()
    dihedral_witness: object = None

    @property
    def irreducible(self):
        return not self.reducible

    def as_dict(self):
        return {"reducible": self.reducible, "irreducible": self.irreducible,
                "dihedral": self.dihedral, "a_priori_small": self.a_priori_small,
                "teichmuller_trace": self.teichmuller_trace}


def classify_pseudorep(pr, absolute=False):
    """Reducible / dihedral / a-priori-small flags by exhaustive character search.

    With absolute=True (fields only) the search runs over the quadratic
    extension of the coefficient field.
    """
    G, R, t, d = pr.group, pr.ring, np.asarray(pr.t), np.asarray(pr.d)
    T = R
    if absolute:
        if not R.is_field:
            raise PreconditionError("absolute classification needs a field")
        T = quadratic_extension(R)
        t, d = embed(R, T, t), embed(R, T, d)
    chars = G.characters(T)
    lookup = {c.key(): c for c in chars}
    constituents = ()
    for c in chars:
        rest = T.sub(t, c.values)
        other = lookup.get(rest.tobytes())
        if other is not None:
            constituents = (c, other)
            break
    reducible = bool(constituents)
    witness = None
    if not reducible:
        for eta in chars:
            if eta.is_trivial():
                continue
            if np.array_equal(T.mul(eta.values, t), t) and \
                    np.array_equal(T.mul(T.mul(eta.values, eta.values), d), d):
                witness = eta
                break
    dihedral = witness is not None
    tt = np.asarray(pr.t)
    teich_trace = bool(np.array_equal(R.teich(R.residue(tt)), tt))
    small = (not reducible) and (not dihedral) and (not teich_trace)
    return Classification(reducible, dihedral, small, teich_trace, constituents, witness)


def two_power_determinant_twist(d):
    """Character chi with d*chi^2 of 2-power order, built from the odd, 2-power
    and pro-p parts of d."""
    R = d.ring
    vals = d.values
    dbar = R.residue(vals)
    sd = R.teich(dbar)
    d0 = R.mul(vals, R.inv(sd))
    F = R.residue_field
    m = 1
    for v in np.unique(dbar):
        o = F.mult_order(int(v))
        m = m * o // np.gcd(m, o)
    a = m
    while a % 2 == 0:
        a //= 2
    two = m // a
    # e1 = 1 mod a, 0 mod two
    e1 = next(k for k in range(0, m + 1) if k % a == 1 % a and k % two == 0)
    d1 = R.pow(sd, e1)
    roots = {int(v): sqrt_unit(R, int(v)) for v in np.unique(d0)}
    sq = np.array([roots[int(v)] for v in d0], dtype=np.int64)
    chi = R.inv(R.mul(R.pow(d1, (a + 1) // 2), sq))
    return Character(d.group, R, chi)


def induce_index2(G, H_mask, chi_values, c, ring):
    """Ind_H^G chi for an index-2 subgroup H (given as a mask over G).

    chi_values is indexed by G; entries outside H are ignored.  On H the image
    is diag(chi(g), chi^c(g)) with chi^c(h) = chi(c^-1 h c); off H it is the
    antidiagonal (0, chi(gc); chi^c(gc^-1), 0).
    """
    H_mask = np.asarray(H_mask, dtype=bool)
    N = len(G)
    if 2 * int(H_mask.sum()) != N:
        raise PreconditionError("H is not of index 2")
    c = int(c)
    if H_mask[c]:
        raise PreconditionError("coset representative lies in H")
    R = ring
    allg = np.arange(N)
    ci = int(G.inv(c))
    chi = np.asarray(chi_values, dtype=np.int64)

    def chi_c(h):
        return chi[G.mul(G.mul(np.full(len(h), ci), h), np.full(len(h), c))]

    images = np.zeros((N, 4), dtype=np.int64)
    inH = allg[H_mask]
    out = allg[~H_mask]
    images[inH, 0] = chi[inH]
    images[inH, 3] = chi_c(inH)
    images[out, 1] = chi[G.mul(out, np.full(len(out), c))]
    images[out, 2] = chi_c(G.mul(out, np.full(len(out), ci)))
    return MatrixRep(G, R, images)


def ad0(rep):
    """Adjoint action on trace-zero matrices, basis (1,0;0,-1), (0,1;0,0), (0,0;1,0).

    Returns an array (N, 3, 3); column j holds the coordinates of g e_j g^-1.
    """
    R = rep.ring
    X = rep.images
    gi = mat_inv(R, X)
    basis = [np.array([1, 0, 0, R.neg(1)]), np.array([0, 1, 0, 0]), np.array([0, 0, 1, 0])]
    cols = []
    for e in basis:
        Y = mat_mul(R, mat_mul(R, X, e[None, :]), gi)
        cols.append(np.stack([Y[:, 0], Y[:, 1], Y[:, 2]], axis=-1))
    return np.stack(cols, axis=-1)


def ad0_trace(rep):
    M = ad0(rep)
    R = rep.ring
    return R.add(R.add(M[:, 0, 0], M[:, 1, 1]), M[:, 2, 2])


def ad0_trace_formula(R, t, d):
    return R.sub(R.mul(R.mul(t, t), R.inv(d)), 1)


# ---------------------------------------------------------------- eigenlines

def invariant_lines(R, mats):
    """Lines over the quadratic extension fixed by every matrix.

    Lines are encoded as z (the line through (1, z)) or -1 for (0, 1).
    """
    if not R.is_field:
        raise PreconditionError("eigenline search needs a field")
    E = quadratic_extension(R)
    mats = np.asarray(mats, dtype=np.int64).reshape(-1, 4)
    Me = embed(R, E, mats)
    z = E.elements()
    ok = np.ones(len(z), dtype=bool)
    ok_inf = True
    for a, b, c, d in Me:
        # b z^2 + (a - d) z - c == 0
        val = E.sub(E.add(E.mul(b, E.mul(z, z)), E.mul(E.sub(a, d), z)), c)
        ok &= (val == 0)
        ok_inf &= (b == 0)
    lines = [int(v) for v in z[ok]]
    if ok_inf:
        lines.append(-1)
    return lines, E


def is_semisimple(rep):
    gens = rep.images[rep.source.gens] if rep.source.gens else rep.images[:1]
    lines, _ = invariant_lines(rep.ring, gens)
    return len(lines) != 1


def is_absolutely_irreducible(rep):
    gens = rep.images[rep.source.gens] if rep.source.gens else rep.images[:1]
    lines, _ = invariant_lines(rep.ring, gens)
    return len(lines) == 0


def recover_twist(rho1, rho2):
    """A character eta with tr rho1 = eta * tr rho2, or None if the adjoint traces differ.

    Returns (eta, field) where field is the coefficient field of eta (the
    original field or its quadratic extension).
    """
    R = rho1.ring
    if rho2.ring != R:
        raise PreconditionError("representations over different fields")
    if not (is_semisimple(rho1) and is_semisimple(rho2)):
        raise PreconditionError("recover_twist needs semisimple representations")
    t1, d1, t2, d2 = rho1.trace(), rho1.det(), rho2.trace(), rho2.det()
    if not np.array_equal(ad0_trace_formula(R, t1, d1), ad0_trace_formula(R, t2, d2)):
        return None
    G = rho1.source
    for T in (R, quadratic_extension(R)):
        a, b = (t1, t2) if T is R else (embed(R, T, t1), embed(R, T, t2))
        for eta in G.characters(T):
            if np.array_equal(T.mul(eta.values, b), a):
                return eta, T
    return None
