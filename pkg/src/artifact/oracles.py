"""Brute-force reference implementations used to cross-check the fast code paths.

These work with Python sets and plain loops over ring elements, sharing only
the ring's elementwise arithmetic with the main code.
"""

import itertools

import numpy as np

from .rep_core import MatrixRep, conjugate, mat_mul
from .ring_core import RingAut


def naive_mul(R, a, b):
    """Product by schoolbook polynomial multiplication of coefficient vectors,
    reducing by the Witt and extension polynomials."""
    f, e, m = R.f, R.e, R.mod
    ca = [int(v) for v in R.coords(int(a))]
    cb = [int(v) for v in R.coords(int(b))]
    # as polynomials in (x, u): entry [b][a] is the coefficient of x^a u^b
    A = [ca[j * f:(j + 1) * f] for j in range(e)]
    B = [cb[j * f:(j + 1) * f] for j in range(e)]

    def wmul(p, q):
        out = [0] * (2 * f - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                out[i + j] += x * y
        wp = [int(c) for c in R.wpoly] if f > 1 else [0, 1]
        for deg in range(len(out) - 1, f - 1, -1):
            c = out[deg]
            if c:
                for k in range(f + 1):
                    out[deg - f + k] -= c * wp[k]
        return [v % m for v in out[:f]]

    prod = [[0] * f for _ in range(2 * e - 1)]
    for i in range(e):
        for j in range(e):
            w = wmul(A[i], B[j])
            prod[i + j] = [(x + y) % m for x, y in zip(prod[i + j], w)]
    if e > 1:
        g = [list(c) for c in R.gpoly]
        for deg in range(2 * e - 2, e - 1, -1):
            c = prod[deg]
            if any(c):
                prod[deg] = [0] * f
                for k in range(e):
                    w = wmul(c, g[k])
                    prod[deg - e + k] = [(x - y) % m for x, y in zip(prod[deg - e + k], w)]
    coords = [v for row in prod[:e] for v in row]
    return int(R.from_coords(np.array(coords, dtype=np.int64)))


# ---------------------------------------------------------------- Lie filtration

def _additive_closure(R, gens):
    """All finite sums of the given triples, grown breadth first as a set."""
    gens = np.unique(np.asarray(gens, dtype=np.int64).reshape(-1, 3), axis=0)
    S = R.size
    seen = {0}
    out = [np.zeros(3, dtype=np.int64)]
    frontier = np.zeros((1, 3), dtype=np.int64)
    while len(frontier):
        sums = R.add(frontier[:, None, :], gens[None, :, :]).reshape(-1, 3)
        keys = (sums[:, 0] * S + sums[:, 1]) * S + sums[:, 2]
        keys, first = np.unique(keys, return_index=True)
        fresh = np.array([k not in seen for k in keys.tolist()], dtype=bool)
        seen.update(keys[fresh].tolist())
        frontier = sums[first[fresh]]
        out.extend(frontier)
    return {tuple(int(v) for v in x) for x in out}


def _theta(R, X):
    a, b, c, d = (int(v) for v in X)
    half = pow(2, -1, R.mod)
    h = int(R.smul(half, R.sub(a, d)))
    return (h, b, c)


def _brackets(R, X, Y):
    """[x, y] for every pair x in X, y in Y (arrays of triples)."""
    X = np.asarray(X, dtype=np.int64)[:, None, :]
    Y = np.asarray(Y, dtype=np.int64)[None, :, :]
    m = R.mul
    a, b, c = X[..., 0], X[..., 1], X[..., 2]
    a2, b2, c2 = Y[..., 0], Y[..., 1], Y[..., 2]
    out = np.stack([R.sub(m(b, c2), m(c, b2)),
                    R.smul(2, R.sub(m(a, b2), m(b, a2))),
                    R.smul(2, R.sub(m(c, a2), m(a, c2)))], axis=-1)
    return out.reshape(-1, 3)


def pink_filtration_oracle(R, elements, depth):
    """L_1 = additive closure of theta(G); L_{k+1} = closure of [L_1, L_k], all as sets."""
    L1 = _additive_closure(R, [_theta(R, X) for X in elements])
    out = [L1]
    L1_arr = np.array(sorted(L1), dtype=np.int64)
    for _ in range(depth - 1):
        prev = np.array(sorted(out[-1]), dtype=np.int64)
        brs = np.unique(_brackets(R, L1_arr, prev), axis=0)
        out.append(_additive_closure(R, brs))
    return out


# ---------------------------------------------------------------- roots of unity

def roots_of_unity_oracle(R, k):
    out = []
    for a in range(R.size):
        if int(R.pow(a, k)) == 1:
            out.append(a)
    return out


# ---------------------------------------------------------------- automorphisms

def _monomials(R):
    """(a, b) exponents of the monomial basis x^a u^b, in coordinate order."""
    return [(a, b) for b in range(R.e) for a in range(R.f)]


def ring_automorphisms_oracle(R):
    """Every pair of images (x', u') whose induced additive map is a bijective
    ring homomorphism, tested on all products of basis monomials.  All pairs
    of ring elements are candidates."""
    mons = _monomials(R)
    D = R.D
    basis = [int(v) for v in R._powers]
    xs = np.arange(R.size) if R.f > 1 else np.ones(1, dtype=np.int64)
    us = np.arange(R.size) if R.e > 1 else np.ones(1, dtype=np.int64)
    X, U = (a.ravel() for a in np.meshgrid(xs, us, indexing="ij"))
    imgs = []
    for a, b in mons:
        v = np.ones_like(X)
        for _ in range(a):
            v = R.mul(v, X)
        for _ in range(b):
            v = R.mul(v, U)
        imgs.append(v)
    ok = np.ones(len(X), dtype=bool)
    for i in range(D):
        for j in range(i, D):
            c = R.coords(int(R.mul(basis[i], basis[j])))
            lhs = np.zeros_like(X)
            for k in range(D):
                if c[k]:
                    lhs = R.add(lhs, R.smul(int(c[k]), imgs[k]))
            ok &= lhs == R.mul(imgs[i], imgs[j])
    found = []
    for idx in np.flatnonzero(ok):
        M = np.array([R.coords(int(v[idx])) for v in imgs], dtype=np.int64)
        aut = RingAut(R, int(X[idx]) if R.f > 1 else None, int(U[idx]) if R.e > 1 else None, M)
        if len(np.unique(aut.apply(np.arange(R.size)))) == R.size:
            found.append(aut)
    return found


# ---------------------------------------------------------------- twists

def twist_group_oracle(pr, auts):
    """Every (sigma, eta): eta is found by trying all unit values on the group
    generators, extending along the Cayley graph and checking the equations."""
    R = pr.ring
    G = pr.group
    t = [int(v) for v in pr.t]
    d = [int(v) for v in pr.d]
    units = [int(a) for a in range(R.size) if bool(R.is_unit(a))]
    gens = list(G.gens)
    e = G.identity_index()
    out = []
    for sigma in auts:
        st = [int(v) for v in sigma.apply(np.array(t))]
        sd = [int(v) for v in sigma.apply(np.array(d))]

        def fits(g, v):
            return int(R.mul(v, t[g])) == st[g] and int(R.mul(R.mul(v, v), d[g])) == sd[g]
        cands = [[v for v in units if fits(g, v)] for g in gens]
        for choice in itertools.product(*cands):
            eta = {e: 1}
            frontier = [e]
            ok = True
            while frontier and ok:
                new = []
                for g in frontier:
                    for gi, v in zip(gens, choice):
                        h = int(G.mul(g, gi))
                        val = int(R.mul(eta[g], v))
                        if h in eta:
                            if eta[h] != val:
                                ok = False
                                break
                        else:
                            eta[h] = val
                            new.append(h)
                    if not ok:
                        break
                frontier = new
            if not ok or len(eta) != len(G):
                continue
            if all(fits(g, eta[g]) for g in range(len(G))):
                out.append((sigma.key(), tuple(eta[g] for g in range(len(G)))))
    return sorted(out)


# ---------------------------------------------------------------- homomorphisms

def conjugacy_class_representatives(T):
    """First element (in index order) of each conjugacy class of the group T."""
    N = len(T)
    perms = []
    for g in T.gens:
        x = T.elements[g]
        perms.append(T.index(conjugate(T.ring, x, T.elements)))
    label = np.full(N, -1, dtype=np.int64)
    reps = []
    for s in range(N):
        if label[s] >= 0:
            continue
        label[s] = s
        frontier = [s]
        while frontier:
            nxt = []
            for p in perms:
                for v in p[frontier]:
                    if label[v] < 0:
                        label[v] = s
                        nxt.append(int(v))
            frontier = nxt
        reps.append(s)
    return np.array(reps, dtype=np.int64)


def homomorphisms(G, T):
    """Every homomorphism from a 2-generated matrix group G into the matrix group T,
    up to conjugation in T: the first generator runs over class representatives,
    the second over all of T, and each choice is extended along a spanning tree
    and checked on every edge of the Cayley graph."""
    gens = list(G.gens)
    if len(gens) != 2:
        raise ValueError("homomorphisms expects a 2-generated source group")
    R = T.ring
    N = len(G)
    e = G.identity_index()
    # spanning tree: parent and generator slot for every element
    parent = np.full(N, -1, dtype=np.int64)
    slot = np.full(N, -1, dtype=np.int64)
    order = [e]
    seen = np.zeros(N, dtype=bool)
    seen[e] = True
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for k, gi in enumerate(gens):
                h = int(G.mul(g, gi))
                if not seen[h]:
                    seen[h] = True
                    parent[h], slot[h] = g, k
                    order.append(h)
                    nxt.append(h)
        frontier = nxt
    go = G.orders()
    to = T.orders()
    firsts = [int(a) for a in conjugacy_class_representatives(T) if go[gens[0]] % to[a] == 0]
    seconds = np.flatnonzero(go[gens[1]] % to == 0)
    edges = G.mul(np.arange(N)[:, None], np.array(gens)[None, :])
    out = []
    ident = np.array([1, 0, 0, 1], dtype=np.int64)
    for a in firsts:
        nb = len(seconds)
        gimg = [np.broadcast_to(T.elements[a], (nb, 4)), T.elements[seconds]]
        img = np.zeros((N, nb, 4), dtype=np.int64)
        img[e] = ident
        for h in order[1:]:
            img[h] = mat_mul(R, img[parent[h]], gimg[slot[h]])
        ok = np.ones(nb, dtype=bool)
        for k in range(2):
            want = mat_mul(R, img, gimg[k][None, :, :])
            ok &= np.all(img[edges[:, k]] == want, axis=(0, 2))
        for j in np.flatnonzero(ok):
            out.append(MatrixRep(G, R, img[:, j, :].copy()))
    return out
