"""Submodules of (Z/p^n)^m kept in Howell normal form.

Everything additive in the package (Lie submodules, subrings, ideals,
eigen-components of gradings) is a subgroup of a free Z/p^n-module, so a
single echelon structure serves all of them.  A row with pivot p^k also has
its multiple p^(n-k)*row represented further down, which gives two useful
properties: membership is decided by plain reduction, and the vectors whose
first j coordinates vanish are spanned by the rows with pivot column >= j.
"""

import itertools

import numpy as np


def _valuation(x, p):
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


class ZpnModule:
    def __init__(self, p, n, dim, vectors=None):
        self.p = p
        self.n = n
        self.dim = dim
        self.mod = p ** n
        self._rows = {}          # pivot column -> (k, row) with row[col] == p**k
        if vectors is not None:
            self.add(vectors)

    # -- construction -------------------------------------------------
    def copy(self):
        m = ZpnModule(self.p, self.n, self.dim)
        m._rows = {c: (k, r.copy()) for c, (k, r) in self._rows.items()}
        return m

    def _insert(self, v):
        p, q = self.p, self.mod
        stack = [np.asarray(v, dtype=np.int64) % q]
        while stack:
            v = stack.pop()
            for col in range(self.dim):
                x = int(v[col])
                if x == 0:
                    continue
                k = _valuation(x, p)
                unit = x // p ** k
                if col in self._rows:
                    kr, r = self._rows[col]
                    if k >= kr:
                        v = (v - (x // p ** kr) * r) % q
                        continue
                    row = (v * pow(unit, -1, q)) % q
                    self._rows[col] = (k, row)
                    stack.append(r)
                    stack.append((p ** (self.n - k) * row) % q)
                    break
                row = (v * pow(unit, -1, q)) % q
                self._rows[col] = (k, row)
                stack.append((p ** (self.n - k) * row) % q)
                break

    def reduce(self, vectors):
        """Reduce a batch (N, dim); rows in the span come back as zero."""
        V = np.array(vectors, dtype=np.int64, copy=True).reshape(-1, self.dim) % self.mod
        for col in sorted(self._rows):
            k, r = self._rows[col]
            pk = self.p ** k
            c = V[:, col]
            ok = (c % pk) == 0
            if not ok.any():
                continue
            coef = np.where(ok, c // pk, 0)
            V = (V - coef[:, None] * r[None, :]) % self.mod
        return V

    def add(self, vectors, chunk=8192):
        """Add vectors to the span.  Returns True if the module grew."""
        V = np.asarray(vectors, dtype=np.int64).reshape(-1, self.dim)
        grew = False
        full = self.mod ** self.dim if self.dim < 20 else None
        for start in range(0, len(V), chunk):
            R = self.reduce(V[start:start + chunk])
            R = R[R.any(axis=1)]
            while len(R):
                self._insert(R[0])
                grew = True
                if full is not None and self.size == full:
                    return grew
                R = self.reduce(R[1:])
                R = R[R.any(axis=1)]
        return grew

    # -- queries ------------------------------------------------------
    def rows(self):
        """Howell basis as an array ordered by pivot column."""
        if not self._rows:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array([self._rows[c][1] for c in sorted(self._rows)], dtype=np.int64)

    def row_orders(self):
        return [self.p ** (self.n - self._rows[c][0]) for c in sorted(self._rows)]

    @property
    def log_size(self):
        return sum(self.n - k for k, _ in self._rows.values())

    @property
    def size(self):
        return self.p ** self.log_size

    def contains(self, vectors):
        R = self.reduce(vectors)
        return ~R.any(axis=1)

    def contains_all(self, vectors):
        V = np.asarray(vectors).reshape(-1, self.dim)
        return bool(len(V) == 0 or self.contains(V).all())

    def issubset(self, other):
        return other.contains_all(self.rows())

    def __eq__(self, other):
        if not isinstance(other, ZpnModule):
            return NotImplemented
        return (self.dim == other.dim and self.log_size == other.log_size
                and self.issubset(other))

    def __hash__(self):
        return hash((self.dim, self.log_size))

    def __add__(self, other):
        m = self.copy()
        m.add(other.rows())
        return m

    def tail(self, j):
        """Submodule of vectors whose first j coordinates are zero."""
        m = ZpnModule(self.p, self.n, self.dim)
        m._rows = {c: (k, r.copy()) for c, (k, r) in self._rows.items() if c >= j}
        return m

    def permuted(self, order):
        """Same module with coordinates reordered as v[order]."""
        order = list(order)
        return ZpnModule(self.p, self.n, self.dim, self.rows()[:, order])

    def projected(self, cols):
        cols = list(cols)
        return ZpnModule(self.p, self.n, len(cols), self.rows()[:, cols])

    def scaled(self, c):
        return ZpnModule(self.p, self.n, self.dim, (self.rows() * c) % self.mod)

    def intersect_coordinates(self, cols):
        """Elements supported on the given coordinates, as vectors in those coordinates."""
        cols = list(cols)
        rest = [i for i in range(self.dim) if i not in cols]
        m = self.permuted(rest + cols).tail(len(rest))
        return m.projected(range(len(rest), self.dim))

    def elements(self, limit=1 << 22):
        """Every element, each exactly once."""
        R = self.rows()
        orders = self.row_orders()
        total = 1
        for o in orders:
            total *= o
        if total > limit:
            raise ValueError(f"module too large to enumerate ({total})")
        out = np.zeros((1, self.dim), dtype=np.int64)
        for r, o in zip(R, orders):
            out = (out[:, None, :] + np.arange(o)[None, :, None] * r[None, None, :]) % self.mod
            out = out.reshape(-1, self.dim)
        return out

    def __repr__(self):
        return f"ZpnModule(p={self.p}, n={self.n}, dim={self.dim}, size=p^{self.log_size})"


def full_module(p, n, dim):
    return ZpnModule(p, n, dim, np.eye(dim, dtype=np.int64))


def span_products(p, n, dim, rows_a, rows_b, mul):
    """Span of all products a*b for rows a, b (bilinear, so basis pairs suffice)."""
    prods = [mul(a, b) for a, b in itertools.product(rows_a, rows_b)]
    return ZpnModule(p, n, dim, np.array(prods).reshape(-1, dim) if prods else None)
