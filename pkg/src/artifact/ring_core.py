"""Finite local rings W(F_q)/p^n and monogenic extensions W[u]/(g).

Elements are plain integers: the coefficient vector in the monomial basis
x^a u^b (index a + f*b) read as base-p^n digits.  Small rings carry full
addition and multiplication tables; larger ones use a structure-constant
tensor, and fields use discrete-log tables.
"""

import functools
import itertools
import json
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import caps
from .abelian import characters as _abelian_characters
from .errors import InputError, NotLocalError, PreconditionError, UnsupportedExtension
from .modules import ZpnModule

TABLE_LIMIT = 1024


# ---------------------------------------------------------------- helpers

def is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_factors(m):
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, modpoly, m):
    """Product of coefficient lists reduced by a monic modpoly, coefficients mod m."""
    deg = len(modpoly) - 1
    res = [0] * (len(a) + len(b) - 1 if a and b else 0)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % m
    for k in range(len(res) - 1, deg - 1, -1):
        c = res[k]
        if c:
            for j in range(deg + 1):
                res[k - deg + j] = (res[k - deg + j] - c * modpoly[j]) % m
    res = res[:deg] + [0] * max(0, deg - len(res))
    return res


def _poly_powmod(a, e, modpoly, m):
    deg = len(modpoly) - 1
    result = [1] + [0] * (deg - 1)
    base = list(a) + [0] * (deg - len(a))
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modpoly, m)
        base = _poly_mulmod(base, base, modpoly, m)
        e >>= 1
    return result


def _poly_divmod_p(a, b, p):
    a = _poly_trim([x % p for x in a])
    b = _poly_trim([x % p for x in b])
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for j, y in enumerate(b):
            a[s + j] = (a[s + j] - c * y) % p
        a = _poly_trim(a)
    return q, a


def _poly_gcd_p(a, b, p):
    a = _poly_trim([x % p for x in a])
    b = _poly_trim([x % p for x in b])
    while b:
        _, r = _poly_divmod_p(a, b, p)
        a, b = b, r
    return a


def _is_irreducible_p(poly, p):
    f = len(poly) - 1
    x = [0, 1]
    for i in range(1, f // 2 + 1):
        xp = _poly_powmod(x, p ** i, poly, p)
        diff = list(xp)
        diff[1] = (diff[1] - 1) % p
        if len(_poly_gcd_p(poly, diff, p)) > 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def canonical_polynomial(p, f):
    """Least monic primitive polynomial of degree f over F_p.

    Order: compare coefficient vectors (c_0, ..., c_{f-1}) as base-p numbers
    read from c_{f-1} down to c_0.  Returned least degree first.
    """
    q = p ** f
    for code in range(p ** f):
        coeffs = [(code // p ** i) % p for i in range(f)] + [1]
        if coeffs[0] == 0:
            continue
        if not _is_irreducible_p(coeffs, p):
            continue
        if f == 1:
            root = (-coeffs[0]) % p
            if all(pow(root, (q - 1) // r, p) != 1 for r in prime_factors(q - 1)):
                return tuple(coeffs)
            continue
        if all(_poly_powmod([0, 1], (q - 1) // r, coeffs, p) != [1] + [0] * (f - 1)
               for r in prime_factors(q - 1)):
            return tuple(coeffs)
    raise AssertionError("no primitive polynomial found")


@functools.lru_cache(maxsize=None)
def teichmuller_polynomial(p, n, f):
    """Lift of the canonical polynomial to Z/p^n whose roots are Teichmuller."""
    base = list(canonical_polynomial(p, f))
    if f == 1:
        mod = p ** n
        g = (-base[0]) % p
        root = pow(g, p ** (n - 1), mod)
        return ((-root) % mod, 1)
    mod = p ** n
    q = p ** f
    omega = _poly_powmod([0, 1], q ** n, base, mod)
    # prod_i (Y - omega^(p^i)); coefficients live in Z/p^n[x]/(base)
    roots = [_poly_powmod(omega, p ** i, base, mod) for i in range(f)]
    poly = [[1] + [0] * (f - 1)]
    for r in roots:
        new = [[0] * f for _ in range(len(poly) + 1)]
        for k, c in enumerate(poly):
            new[k + 1] = [(a + b) % mod for a, b in zip(new[k + 1], c)]
            prod = _poly_mulmod(c, r, base, mod)
            new[k] = [(a - b) % mod for a, b in zip(new[k], prod)]
        poly = new
    out = []
    for c in poly:
        if any(c[1:]):
            raise AssertionError("lifted polynomial not defined over Z/p^n")
        out.append(c[0] % mod)
    return tuple(out)


# ---------------------------------------------------------------- spec

@dataclass(frozen=True)
class RingSpec:
    p: int
    n: int = 1
    f: int = 1
    ext_var: str = None
    ext_minpoly: tuple = None     # tuple of tuples (W-coefficient vectors)

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict):
            raise InputError("ring spec must be an object")
        try:
            p = obj["p"]
        except KeyError:
            raise InputError("ring spec needs p")
        n = obj.get("n", 1)
        f = obj.get("f", 1)
        for name, v in (("p", p), ("n", n), ("f", f)):
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise InputError(f"ring spec field {name} must be a positive integer", field=name)
        ext = obj.get("ext")
        var, mp = None, None
        if ext is not None:
            if not isinstance(ext, dict) or "minpoly" not in ext:
                raise InputError("ext must be an object with minpoly")
            var = ext.get("var", "u")
            if not isinstance(var, str):
                raise InputError("ext.var must be a string")
            raw = ext["minpoly"]
            if not isinstance(raw, list) or len(raw) < 2:
                raise InputError("minpoly must be a list of at least two coefficients")
            coeffs = []
            for c in raw:
                if isinstance(c, int) and not isinstance(c, bool):
                    coeffs.append((c,) + (0,) * (f - 1))
                elif isinstance(c, list) and len(c) <= f and all(
                        isinstance(x, int) and not isinstance(x, bool) for x in c):
                    coeffs.append(tuple(c) + (0,) * (f - len(c)))
                else:
                    raise InputError("minpoly coefficients must be integers or W-coefficient lists")
            mp = tuple(coeffs)
        return cls(p, n, f, var, mp)

    def to_json(self):
        out = {"p": self.p, "n": self.n, "f": self.f}
        if self.ext_minpoly is not None:
            mp = [c[0] if not any(c[1:]) else list(c) for c in self.ext_minpoly]
            out["ext"] = {"var": self.ext_var, "minpoly": mp}
        return out


# ---------------------------------------------------------------- ring

class LocalRing:
    """A finite local ring; see module docstring for the element encoding."""

    def __init__(self, spec):
        p, n, f = spec.p, spec.n, spec.f
        if not is_prime(p):
            raise InputError(f"p = {p} is not prime", field="p")
        if p == 2:
            raise InputError("p = 2 is not supported", field="p")
        self.spec = spec
        self.p, self.n, self.f = p, n, f
        self.mod = p ** n
        self.q = p ** f
        self.wpoly = teichmuller_polynomial(p, n, f)
        if spec.ext_minpoly is not None:
            g = [tuple(x % self.mod for x in c) for c in spec.ext_minpoly]
            if any(g[-1][1:]) or g[-1][0] != 1:
                raise InputError("extension polynomial must be monic")
            self.gpoly = g
            self.e = len(g) - 1
        else:
            self.gpoly = None
            self.e = 1
        self.D = f * self.e
        caps.check("ring", self.mod ** self.D, "ring")
        self.size = self.mod ** self.D
        self.is_field = (n == 1 and self.e == 1)
        self._powers = self.mod ** np.arange(self.D, dtype=np.int64)
        self._build_structure()
        if self.is_field:
            self.residue_field = self
        else:
            self.residue_field = make_ring(RingSpec(p, 1, f))
        self._check_local()
        self._build_tables()
        self._build_teichmuller()
        self._roots_cache = {}

    # -- construction ----------------------------------------------
    def _wmul(self, a, b):
        if self.f == 1:
            return [(a[0] * b[0]) % self.mod]
        return _poly_mulmod(a, b, list(self.wpoly), self.mod)

    def _full_mul(self, A, B):
        e, f, m = self.e, self.f, self.mod
        res = [[0] * f for _ in range(2 * e - 1)]
        for i in range(e):
            for j in range(e):
                pr = self._wmul(A[i], B[j])
                res[i + j] = [(x + y) % m for x, y in zip(res[i + j], pr)]
        for deg in range(2 * e - 2, e - 1, -1):
            c = res[deg]
            if any(c):
                res[deg] = [0] * f
                for j in range(e):
                    pr = self._wmul(c, list(self.gpoly[j]))
                    res[deg - e + j] = [(x - y) % m for x, y in zip(res[deg - e + j], pr)]
        return res[:e]

    def _build_structure(self):
        D, e, f = self.D, self.e, self.f
        T = np.zeros((D, D, D), dtype=np.int64)
        basis = []
        for i in range(D):
            M = [[0] * f for _ in range(e)]
            M[i // f][i % f] = 1
            basis.append(M)
        for i in range(D):
            for j in range(i, D):
                prod = self._full_mul(basis[i], basis[j])
                vec = [prod[b][a] for b in range(e) for a in range(f)]
                T[i, j] = vec
                T[j, i] = vec
        self.T = T
        self.x = int(self._powers[1]) if f > 1 else None
        self.u = int(self._powers[f]) if self.e > 1 else None

    def _check_local(self):
        self.res_root = 0
        if self.gpoly is None:
            return
        F = self.residue_field
        gbar = [F.from_coords([c % self.p for c in coeffs]) for coeffs in self.gpoly]
        e = self.e
        for r in range(F.size):
            # coefficients of (u - r)^e
            target = [0] * (e + 1)
            for k in range(e + 1):
                binom = 1
                for i in range(k):
                    binom = binom * (e - i) // (i + 1)
                val = F.pow(F.neg(r), e - k) if e - k > 0 else 1
                target[k] = int(F.smul(binom, val))
            if all(int(a) == int(b) for a, b in zip(gbar, target)):
                self.res_root = r
                return
        # not a power of a linear polynomial: decide local vs not
        Rbar = _residue_algebra_idempotents(self)
        if Rbar > 2:
            raise NotLocalError("extension does not define a local ring",
                                minpoly=[list(c) for c in self.gpoly])
        raise UnsupportedExtension(
            "extension reduces to a power of a non-linear irreducible; only powers "
            "of linear polynomials are supported", minpoly=[list(c) for c in self.gpoly])

    def _build_tables(self):
        self.tabled = self.size <= TABLE_LIMIT
        self._log = self._exp = None
        if self.tabled:
            allel = np.arange(self.size, dtype=np.int64)
            C = self.coords(allel)
            addc = (C[:, None, :] + C[None, :, :]) % self.mod
            self._add = (addc * self._powers).sum(-1)
            mul = np.zeros((self.size, self.size), dtype=np.int64)
            step = max(1, 4096 // max(1, self.D * self.D))
            for s in range(0, self.size, step):
                mul[s:s + step] = self._mul_coords_elem(C[s:s + step, None, :], C[None, :, :])
            self._mul = mul
            self._neg = self.from_coords((-C) % self.mod)
        self._residue = None
        if self.size <= (1 << 20):
            self._residue = self._residue_compute(np.arange(self.size, dtype=np.int64))
        if self.is_field:
            self._build_logs()
        self.unit_count = self.size - self.size // self.q
        if self.tabled:
            units = np.flatnonzero(self._residue != 0)
            inv = np.full(self.size, -1, dtype=np.int64)
            prod = self._mul[units][:, units]
            r, c = np.nonzero(prod == 1)
            inv[units[r]] = units[c]
            self._inv = inv

    def _build_logs(self):
        q = self.q
        exp = np.zeros(q - 1, dtype=np.int64)
        if self.f == 1:
            g = (-canonical_polynomial(self.p, 1)[0]) % self.p
        else:
            g = self.x
        cur = 1
        for k in range(q - 1):
            exp[k] = cur
            cur = int(self._mul_generic(np.int64(cur), np.int64(g)))
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self._exp, self._log = exp, log
        self.generator = int(g)

    def _build_teichmuller(self):
        F = self.residue_field
        q = self.q
        table = np.zeros(q, dtype=np.int64)
        if self.f == 1:
            for a in range(1, q):
                table[a] = pow(a, self.p ** (self.n - 1), self.mod)
        else:
            # x is Teichmuller and reduces to the field generator
            cur = 1
            for k in range(q - 1):
                table[F._exp[k]] = cur
                cur = int(self.mul(cur, self.x))
        self._teich = table

    # -- coordinates -----------------------------------------------
    def coords(self, a):
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._powers) % self.mod

    def from_coords(self, c):
        c = np.asarray(c, dtype=np.int64) % self.mod
        if c.shape[-1] < self.D:
            pad = [(0, 0)] * (c.ndim - 1) + [(0, self.D - c.shape[-1])]
            c = np.pad(c, pad)
        return (c * self._powers).sum(-1)

    def to_list(self, a):
        return [int(v) for v in self.coords(int(a))]

    def parse_elem(self, obj):
        if isinstance(obj, bool):
            raise InputError("ring element must be an integer or coefficient list")
        if isinstance(obj, int):
            return int(obj % self.mod)
        if isinstance(obj, list) and len(obj) <= self.D and all(
                isinstance(v, int) and not isinstance(v, bool) for v in obj):
            return int(self.from_coords(obj))
        raise InputError("ring element must be an integer or a coefficient list of length <= %d" % self.D)

    # -- arithmetic ------------------------------------------------
    def _mul_coords_elem(self, a, b):
        if self.D == 1:
            return ((a[..., 0] * b[..., 0]) % self.mod)
        outer = (a[..., :, None] * b[..., None, :]) % self.mod
        res = np.tensordot(outer, self.T, axes=([-2, -1], [0, 1])) % self.mod
        return (res * self._powers).sum(-1)

    def _mul_generic(self, a, b):
        if self.is_field and self._log is not None:
            a = np.asarray(a, dtype=np.int64)
            b = np.asarray(b, dtype=np.int64)
            z = (a == 0) | (b == 0)
            la = self._log[np.where(z, 1, a)]
            lb = self._log[np.where(z, 1, b)]
            return np.where(z, 0, self._exp[(la + lb) % (self.q - 1)])
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if self.D == 1:
            return (a * b) % self.mod
        return self._mul_coords_elem(self.coords(a), self.coords(b))

    def add(self, a, b):
        if self.tabled:
            return self._add[a, b]
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        return self.from_coords(self.coords(a) + self.coords(b))

    def neg(self, a):
        if self.tabled:
            return self._neg[a]
        return self.from_coords(-self.coords(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.tabled:
            return self._mul[a, b]
        return self._mul_generic(a, b)

    def smul(self, k, a):
        """Integer multiple k*a."""
        return self.from_coords(self.coords(a) * (int(k) % self.mod))

    def pow(self, a, k):
        a = np.asarray(a, dtype=np.int64)
        if k < 0:
            return self.pow(self.inv(a), -k)
        result = np.ones_like(a)
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if not np.all(self.is_unit(a)):
            raise PreconditionError("inverse of a non-unit")
        if self.tabled:
            return self._inv[a]
        if self.is_field and self._log is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.unit_count - 1)

    def dot(self, coeffs, elems):
        """Sum of coeffs[i] * elems[i] along the last axis."""
        prods = self.mul(coeffs, elems)
        return self.sum(prods, axis=-1)

    def sum(self, a, axis=-1):
        c = self.coords(a)
        return self.from_coords(c.sum(axis=axis - 1 if axis < 0 else axis) % self.mod)

    def elements(self):
        return np.arange(self.size, dtype=np.int64)

    # -- residue ---------------------------------------------------
    def _residue_compute(self, a):
        C = self.coords(a).reshape(np.shape(a) + (self.e, self.f)) % self.p
        digits = (self.p ** np.arange(self.f, dtype=np.int64))
        w = (C * digits).sum(-1)
        if self.e == 1 or self.res_root == 0:
            return w[..., 0]
        F = self.residue_field
        total = np.zeros(np.shape(a), dtype=np.int64)
        rp = 1
        for b in range(self.e):
            total = F.add(total, F.mul(w[..., b], rp))
            rp = int(F.mul(rp, self.res_root))
        return total

    def residue(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self._residue is not None:
            return self._residue[a]
        return self._residue_compute(a)

    def is_unit(self, a):
        return self.residue(a) != 0

    def in_maximal_ideal(self, a):
        return self.residue(a) == 0

    def teich(self, a):
        return self._teich[np.asarray(a, dtype=np.int64)]

    def units(self):
        allel = self.elements()
        return allel[self.is_unit(allel)]

    def maximal_ideal_generators(self):
        gens = []
        if self.n > 1:
            gens.append(self.p)
        if self.e > 1:
            gens.append(int(self.sub(self.u, self.teich(self.res_root))))
        return gens

    def maximal_ideal(self):
        return ideal_span(self, self.maximal_ideal_generators())

    def lift_residue(self, a):
        """Integer-digit section F -> A (additive, not multiplicative)."""
        F = self.residue_field
        c = F.coords(a)
        full = np.zeros(np.shape(a) + (self.D,), dtype=np.int64)
        full[..., :self.f] = c
        return self.from_coords(full)

    def roots_of_one(self, k):
        """All x in A with x**k == 1, by exhaustive scan (no hypothesis on k)."""
        if k not in self._roots_cache:
            caps.check("ring", self.size)
            u = self.units()
            self._roots_cache[k] = u[self.pow(u, k) == 1]
        return self._roots_cache[k]

    def mult_order(self, a):
        a = int(a)
        if not self.is_unit(a):
            raise PreconditionError("order of a non-unit")
        k, cur = 1, a
        while cur != 1:
            cur = int(self.mul(cur, a))
            k += 1
        return k

    def describe(self):
        return json.dumps(self.spec.to_json(), sort_keys=True)

    def __repr__(self):
        return f"LocalRing({self.describe()})"

    def __eq__(self, other):
        return isinstance(other, LocalRing) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)


def _residue_algebra_idempotents(ring):
    """Number of idempotents in A/pA (2 iff A is local)."""
    p, D = ring.p, ring.D
    Tp = ring.T % p
    count = 0
    for vec in itertools.product(range(p), repeat=D):
        v = np.array(vec)
        sq = np.einsum("i,j,ijk->k", v, v, Tp) % p
        if np.array_equal(sq, v):
            count += 1
    return count


@functools.lru_cache(maxsize=64)
def _make_ring_cached(spec):
    return LocalRing(spec)


def make_ring(spec):
    """Build (or fetch the cached) ring for a RingSpec, dict or JSON string."""
    if not isinstance(spec, RingSpec):
        spec = RingSpec.from_json(spec)
    R = _make_ring_cached(spec)
    caps.check("ring", R.size, "ring")
    return R


def ring(p, n=1, f=1, ext=None):
    """Shorthand: ring(3, 2, 1, ext=[-3, 0, 0, 1])."""
    d = {"p": p, "n": n, "f": f}
    if ext is not None:
        d["ext"] = {"var": "u", "minpoly": list(ext)}
    return make_ring(d)


# ---------------------------------------------------------------- spans

class Span:
    """An additive subgroup of a ring, stored as a Z/p^n-module of coordinates."""

    def __init__(self, ring, module):
        self.ring = ring
        self.module = module

    @classmethod
    def of(cls, ring, elems):
        elems = np.asarray(elems, dtype=np.int64).ravel()
        m = ZpnModule(ring.p, ring.n, ring.D)
        if len(elems):
            m.add(ring.coords(elems))
        return cls(ring, m)

    @classmethod
    def whole(cls, ring):
        return cls.of(ring, ring._powers)

    @property
    def size(self):
        return self.module.size

    def basis(self):
        return [int(v) for v in self.ring.from_coords(self.module.rows())] if self.module.rows().size else []

    def elements(self):
        return self.ring.from_coords(self.module.elements())

    def contains(self, elems):
        elems = np.asarray(elems, dtype=np.int64).ravel()
        return self.module.contains(self.ring.coords(elems))

    def contains_all(self, elems):
        return bool(np.all(self.contains(elems)))

    def __eq__(self, other):
        return isinstance(other, Span) and self.module == other.module

    def __hash__(self):
        return hash(self.module)

    def issubset(self, other):
        return self.module.issubset(other.module)

    def __add__(self, other):
        return Span(self.ring, self.module + other.module)

    def times(self, other):
        """Additive span of all products."""
        a, b = self.basis(), other.basis()
        if not a or not b:
            return Span.of(self.ring, [])
        prods = self.ring.mul(np.array(a)[:, None], np.array(b)[None, :]).ravel()
        return Span.of(self.ring, prods)

    def is_closed_under_mul(self):
        return self.times(self).issubset(self)

    def __repr__(self):
        return f"Span(size={self.size}, basis={self.basis()})"


def ideal_span(ring, gens):
    """The ideal generated by gens."""
    gens = [int(g) for g in gens]
    if not gens:
        return Span.of(ring, [])
    basis = ring._powers
    prods = ring.mul(np.array(gens)[:, None], basis[None, :]).ravel()
    return Span.of(ring, prods)


def teichmuller_span(ring, subfield_elems=None):
    """Z/p^n-span of s(E) for a subfield E of the residue field (default: all of it)."""
    F = ring.residue_field
    if subfield_elems is None:
        subfield_elems = F.elements()
    return Span.of(ring, ring.teich(np.asarray(subfield_elems)))


# ---------------------------------------------------------------- local ring helpers

def teichmuller(r, a):
    """Teichmuller representative of a residue-field element."""
    F = r.residue_field
    a = int(a)
    if not 0 <= a < F.size:
        raise InputError("not a residue field element")
    return int(r.teich(a))


def sqrt_unit(r, x):
    """Square root congruent to 1 of an element of 1 + m, by the binomial series."""
    x = int(x)
    if int(r.residue(x)) != 1:
        raise PreconditionError("sqrt_unit needs an element congruent to 1", value=r.to_list(x))
    y = int(r.sub(x, 1))
    total = 1
    power = 1
    k = 1
    while True:
        power = int(r.mul(power, y))
        if power == 0:
            break
        # binom(1/2, k) = (-1)^(k+1) * Catalan(k-1) / 2^(2k-1)
        cat = _catalan(k - 1)
        coeff = (cat * pow(2, -(2 * k - 1), r.mod)) % r.mod
        if k % 2 == 0:
            coeff = (-coeff) % r.mod
        total = int(r.add(total, r.smul(coeff, power)))
        k += 1
    return total


def sqrt_unit_array(r, xs):
    """Vectorized sqrt_unit over an array of elements of 1 + m."""
    xs = np.asarray(xs, dtype=np.int64)
    if not np.all(r.residue(xs) == 1):
        raise PreconditionError("sqrt_unit needs elements congruent to 1")
    y = r.sub(xs, 1)
    total = np.ones_like(xs)
    power = np.ones_like(xs)
    k = 1
    while True:
        power = r.mul(power, y)
        if not np.any(power):
            break
        coeff = (_catalan(k - 1) * pow(2, -(2 * k - 1), r.mod)) % r.mod
        if k % 2 == 0:
            coeff = (-coeff) % r.mod
        total = r.add(total, r.smul(coeff, power))
        k += 1
    return total


@functools.lru_cache(maxsize=None)
def _catalan(k):
    c = 1
    for i in range(k):
        c = c * 2 * (2 * i + 1) // (i + 2)
    return c


def roots_of_unity(r, k):
    """mu_k(A) computed as the Teichmuller image of the residue k-th roots."""
    if k < 1:
        raise InputError("k must be positive")
    if k % r.p == 0:
        raise PreconditionError("roots_of_unity needs p not dividing k", p=r.p, k=k)
    F = r.residue_field
    g = gcd(k, F.q - 1)
    step = (F.q - 1) // g
    res_roots = F._exp[np.arange(g) * step]
    return sorted(int(v) for v in r.teich(res_roots))


# ---------------------------------------------------------------- automorphisms

class RingAut:
    """A ring automorphism, stored as the matrix of its action on coordinates."""

    def __init__(self, ring, x_image, u_image, matrix=None):
        self.ring = ring
        self.x_image = None if x_image is None else int(x_image)
        self.u_image = None if u_image is None else int(u_image)
        if matrix is None:
            matrix = _aut_matrix(ring, self.x_image, self.u_image)
        self.M = np.asarray(matrix, dtype=np.int64) % ring.mod
        self._perm = None

    def apply(self, a):
        a = np.asarray(a, dtype=np.int64)
        c = self.ring.coords(a)
        return self.ring.from_coords((c @ self.M) % self.ring.mod)

    __call__ = apply

    @property
    def perm(self):
        if self._perm is None:
            caps.check("ring", self.ring.size)
            self._perm = self.apply(self.ring.elements())
        return self._perm

    def compose(self, other):
        """self after other."""
        M = (other.M @ self.M) % self.ring.mod
        xi = None if self.x_image is None else int(self.apply(other.x_image))
        ui = None if self.u_image is None else int(self.apply(other.u_image))
        return RingAut(self.ring, xi, ui, M)

    def is_identity(self):
        return bool(np.array_equal(self.M, np.eye(self.ring.D, dtype=np.int64)))

    def order(self):
        k, cur = 1, self
        while not cur.is_identity():
            cur = cur.compose(self)
            k += 1
        return k

    def inverse(self):
        k = self.order()
        cur = identity_aut(self.ring)
        for _ in range(k - 1):
            cur = cur.compose(self)
        return cur

    def residue_exponent(self):
        """i with sigma mod m equal to Frobenius^i."""
        r = self.ring
        if r.f == 1:
            return 0
        F = r.residue_field
        xr = int(r.residue(self.x_image))
        xbar = int(r.residue(r.x))
        for i in range(r.f):
            if int(F.pow(xbar, r.p ** i)) == xr:
                return i
        raise AssertionError("automorphism does not act on the residue field")

    def key(self):
        return self.M.tobytes()

    def __eq__(self, other):
        return isinstance(other, RingAut) and self.ring == other.ring and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_json(self):
        out = {}
        if self.x_image is not None:
            out["x"] = self.ring.to_list(self.x_image)
        if self.u_image is not None:
            out[self.ring.spec.ext_var or "u"] = self.ring.to_list(self.u_image)
        return out

    def __repr__(self):
        return f"RingAut({self.to_json()})"


def _aut_matrix(ring, x_image, u_image):
    D, f, e = ring.D, ring.f, ring.e
    xi = 1 if x_image is None else x_image
    ui = 1 if u_image is None else u_image
    xp = [1]
    for _ in range(1, f):
        xp.append(int(ring.mul(xp[-1], xi)))
    up = [1]
    for _ in range(1, e):
        up.append(int(ring.mul(up[-1], ui)))
    rows = []
    for i in range(D):
        a, b = i % f, i // f
        rows.append(ring.coords(int(ring.mul(xp[a], up[b]))))
    return np.array(rows, dtype=np.int64)


def identity_aut(ring):
    return RingAut(ring, ring.x, ring.u, np.eye(ring.D, dtype=np.int64))


def frobenius_power(ring, i):
    """The automorphism acting as x -> x^(p^i) on W and fixing u (when that is one)."""
    xi = int(ring.pow(ring.x, ring.p ** i)) if ring.x is not None else None
    return RingAut(ring, xi, ring.u)


def _apply_on_w(ring, xi, w):
    """Apply x -> xi to a W-element given by its coordinate list (length f)."""
    total = 0
    cur = 1
    for a, c in enumerate(w):
        if a:
            cur = int(ring.mul(cur, xi))
        if c:
            total = int(ring.add(total, ring.smul(c, cur)))
    return total


def ring_automorphisms(r):
    """Every automorphism of r.  Candidates for u are restricted by residue."""
    out = []
    F = r.residue_field
    m_size = r.size // r.q
    for i in range(r.f):
        xi = int(r.pow(r.x, r.p ** i)) if r.x is not None else None
        if r.e == 1:
            out.append(RingAut(r, xi, None))
            continue
        caps.check("aut", r.f * m_size, "automorphism candidate")
        gs = [_apply_on_w(r, 1 if xi is None else xi, c) for c in r.gpoly]
        # sigma-bar(root) in the residue field
        target = int(F.pow(r.res_root, r.p ** i)) if r.res_root else 0
        cand = r.elements()
        cand = cand[r.residue(cand) == target]
        val = np.zeros(len(cand), dtype=np.int64)
        for j in range(r.e, -1, -1):
            val = r.add(r.mul(val, cand), gs[j])
        for v in cand[val == 0]:
            aut = RingAut(r, xi, int(v))
            if ZpnModule(r.p, r.n, r.D, aut.M).size == r.size:
                out.append(aut)
    out.sort(key=lambda a: (a.x_image or 0, a.u_image or 0))
    return out


# ---------------------------------------------------------------- involutions and gradings

def involution_split(r, star):
    """(A+, A-) for an involutive automorphism."""
    sq = star.compose(star)
    if not sq.is_identity():
        raise PreconditionError("automorphism is not an involution")
    half = pow(2, -1, r.mod)
    basis = r._powers
    img = star.apply(basis)
    plus = r.smul(half, r.add(basis, img))
    minus = r.smul(half, r.sub(basis, img))
    return Span.of(r, plus), Span.of(r, minus)


def automorphism_from_images(r, x_image=None, u_image=None):
    """Validate generator images and return the automorphism, or raise."""
    xi = r.x if x_image is None else int(x_image)
    ui = r.u if u_image is None else int(u_image)
    if r.x is not None:
        # x must go to a root of the defining polynomial
        val = 0
        for c in reversed(r.wpoly):
            val = int(r.add(r.mul(val, xi), c))
        if val != 0:
            raise PreconditionError("image of x is not a root of its minimal polynomial")
    if r.u is not None:
        gs = [_apply_on_w(r, 1 if r.x is None else xi, c) for c in r.gpoly]
        val = 0
        for c in reversed(gs):
            val = int(r.add(r.mul(val, ui), c))
        if val != 0:
            raise PreconditionError("generator images do not preserve the defining relation")
    aut = RingAut(r, xi if r.x is not None else None, ui if r.u is not None else None)
    if ZpnModule(r.p, r.n, r.D, aut.M).size != r.size:
        raise PreconditionError("generator images do not define a bijection")
    return aut


@dataclass
class Grading:
    ring: LocalRing
    X: list
    characters: list                  # each: list of ring units aligned with X
    components: list                  # Span per character
    coefficients: list = field(default_factory=list)   # per character: list of (coef, sigma^-1)

    def project(self, index, a):
        r = self.ring
        a = np.asarray(a, dtype=np.int64)
        total = np.zeros_like(a)
        for coef, sinv in self.coefficients[index]:
            total = r.add(total, r.mul(coef, sinv.apply(a)))
        return total

    def character_product(self, i, j):
        r = self.ring
        prod = [int(r.mul(a, b)) for a, b in zip(self.characters[i], self.characters[j])]
        return self.characters.index(prod)

    def check(self):
        """Exhaustive structural checks on a Z/p^n basis; returns a dict of booleans."""
        r = self.ring
        basis = r._powers
        k = len(self.characters)
        images = [self.project(i, basis) for i in range(k)]
        orth = True
        for i in range(k):
            for j in range(k):
                twice = self.project(i, images[j])
                want = images[j] if i == j else np.zeros_like(basis)
                orth &= bool(np.array_equal(twice, want))
        total = np.zeros_like(basis)
        for im in images:
            total = r.add(total, im)
        sums = bool(np.array_equal(total, basis))
        mult = True
        for i in range(k):
            for j in range(k):
                target = self.components[self.character_product(i, j)]
                mult &= self.components[i].times(self.components[j]).issubset(target)
        direct = sum(c.module.log_size for c in self.components) == r.n * r.D
        return {"orthogonal": orth, "sum_to_identity": sums, "multiplicative": mult,
                "direct_sum": direct}


def _aut_table(X):
    idx = {a.key(): i for i, a in enumerate(X)}
    m = len(X)
    table = np.zeros((m, m), dtype=np.int64)
    for i, a in enumerate(X):
        for j, b in enumerate(X):
            c = a.compose(b)
            if c.key() not in idx:
                raise PreconditionError("automorphism list is not closed under composition")
            table[i, j] = idx[c.key()]
    if not np.array_equal(table, table.T):
        raise PreconditionError("automorphism group is not abelian")
    ident = [i for i, a in enumerate(X) if a.is_identity()]
    if not ident:
        raise PreconditionError("automorphism list lacks the identity")
    return table, ident[0]


def grading_from_automorphisms(r, X):
    """Decompose r into eigen-components for a finite abelian group X of automorphisms."""
    X = list(X)
    table, ident = _aut_table(X)
    m = len(X)
    if m % r.p == 0:
        raise PreconditionError("order of the acting group is not invertible", order=m)
    from .abelian import element_orders
    for k in sorted(set(int(o) for o in element_orders(table, ident))):
        if len(r.roots_of_one(k)) != k:
            raise PreconditionError("condition on roots of unity fails", order=k,
                                    found=len(r.roots_of_one(k)))
    chars = _abelian_characters(table, ident, r.roots_of_one, r.mul, 1)
    chars = sorted([[int(v) for v in c] for c in chars])
    minv = pow(m, -1, r.mod)
    inverses = [a.inverse() for a in X]
    coeffs, comps = [], []
    for phi in chars:
        cl = [(int(r.smul(minv, phi[i])), inverses[i]) for i in range(m)]
        coeffs.append(cl)
    g = Grading(r, X, chars, [], coeffs)
    basis = r._powers
    for i in range(len(chars)):
        comps.append(Span.of(r, g.project(i, basis)))
    g.components = comps
    return g


# ---------------------------------------------------------------- subfields and embeddings

def subfield_elements(F, k):
    """Elements of the subfield of size p^k inside a finite field ring F."""
    if F.f % k:
        raise PreconditionError("not a subfield degree")
    allel = F.elements()
    return allel[F.pow(allel, F.p ** k) == allel]


def element_degree(F, a):
    """Degree over F_p of the field generated by a."""
    a = int(a)
    for k in range(1, F.f + 1):
        if F.f % k == 0 and int(F.pow(a, F.p ** k)) == a:
            return k
    raise AssertionError


def subfield_generator(F, k):
    """Canonical primitive element of the degree-k subfield."""
    return int(F._exp[(F.q - 1) // (F.p ** k - 1)])


@functools.lru_cache(maxsize=None)
def field_embedding(small_spec, big_spec):
    """Array mapping each element of the small field to the big field."""
    S, B = make_ring(small_spec), make_ring(big_spec)
    if B.f % S.f or S.p != B.p or not (S.is_field and B.is_field):
        raise PreconditionError("no embedding between these fields")
    if S.f == 1:
        return np.arange(S.size, dtype=np.int64)
    poly = canonical_polynomial(S.p, S.f)
    allel = B.elements()
    val = np.zeros(B.size, dtype=np.int64)
    for c in reversed(poly):
        val = B.add(B.mul(val, allel), c)
    root = int(allel[val == 0][0])
    powers = [1]
    for _ in range(1, S.f):
        powers.append(int(B.mul(powers[-1], root)))
    C = S.coords(S.elements())
    out = np.zeros(S.size, dtype=np.int64)
    for a in range(S.f):
        out = B.add(out, B.mul(C[:, a] % S.p, powers[a]))
    return out


def embed(small, big, a):
    return field_embedding(small.spec, big.spec)[np.asarray(a, dtype=np.int64)]


def quadratic_extension(F):
    return make_ring(RingSpec(F.p, 1, 2 * F.f))
