"""Verification suite: concrete instances of every acceptance property.

Each instance returns (ok, detail).  Instances are sorted by id; ids start with
the criterion number so a regular expression can select them.
"""

import copy
import re
import time
from dataclasses import dataclass, field

import numpy as np

from . import bundled, oracles
from .cst import (fixed_subring, reduce_twists, satisfies_twist, twist_group)
from .pink_lie import (LieSubmodule, congruence_subgroup, decompose_lie, generated_subring,
                       in_SR1, j_smallness, j_span, level_detector, pink_filtration,
                       pink_group_H)
from .rep_core import (Character, MatrixRep, ad0_trace, ad0_trace_formula, close_group,
                       is_semisimple, recover_twist)
from .residual_analysis import compute_E, residual_twists
from .ring_core import (Span, embed, frobenius_power, grading_from_automorphisms, ideal_span,
                        involution_split, ring, ring_automorphisms, roots_of_unity,
                        subfield_elements)


@dataclass
class Instance:
    id: str
    criterion: int
    run: object


@dataclass
class Result:
    id: str
    criterion: int
    ok: bool
    seconds: float
    detail: dict = field(default_factory=dict)

    def line(self):
        return f"{'PASS' if self.ok else 'FAIL'} {self.id} ({self.seconds:.2f}s)"


def _as_set(M):
    return set(map(tuple, np.asarray(M).reshape(len(M), -1).tolist()))


def perturbed_ring(R):
    """A copy of a tabled ring whose multiplication table has one wrong entry."""
    P = copy.copy(R)
    P._mul = R._mul.copy()
    a = int(R.maximal_ideal_generators()[0])
    wrong = int(R.add(R._mul[a, a], 1))
    P._mul[a, a] = wrong
    return P


# ---------------------------------------------------------------- 1, 2, 3

def congruence_lie(R, depth=3):
    m = R.maximal_ideal()
    G = congruence_subgroup(R, m)
    Ls = pink_filtration(G, depth)
    I = m
    detail = {}
    ok = True
    for n in range(1, depth + 1):
        want = LieSubmodule.sl2(R, I)
        same = _as_set(Ls[n - 1].elements()) == _as_set(want.elements())
        detail[f"n={n}"] = {"size": Ls[n - 1].size, "expected": want.size, "equal": same}
        ok &= same
        I = I.times(m)
    return ok, detail


def commutator_congruence():
    R = ring(3, 3)
    G = congruence_subgroup(R, ideal_span(R, [3]))
    D = G.elements[G.derived_subgroup()]
    G9 = congruence_subgroup(R, ideal_span(R, [9]))
    ok = _as_set(D) == _as_set(G9.elements)
    return ok, {"derived": len(D), "level_9": len(G9)}


def perfect_sl2(R):
    S = congruence_subgroup(R, Span.whole(R))
    D = S.derived_subgroup()
    return len(D) == len(S), {"order": len(S), "derived": len(D)}


def pink_correspondence(seed):
    R = ring(3, 3)
    G = congruence_subgroup(R, ideal_span(R, [3]))
    rng = np.random.default_rng(seed)
    i, j = (int(v) for v in rng.integers(0, len(G), 2))
    H = close_group(R, G.elements[[i, j]])
    Ls = pink_filtration(H, 3)
    lcs = H.lower_central_series(3)
    detail = {"order": len(H)}
    ok = True
    for n in (2, 3):
        Hn = pink_group_H(Ls[n - 1])
        same = _as_set(Hn.elements) == _as_set(H.elements[lcs[n - 1]])
        detail[f"n={n}"] = {"H": len(Hn), "lower_central": len(lcs[n - 1]), "equal": same}
        ok &= same
    return ok, detail


# ---------------------------------------------------------------- 4, 5

def _gl2(F):
    gens = [[1, 1, 0, 1], [1, 0, 1, 1], [F.x if F.x is not None else _prim(F), 0, 0, 1]]
    return close_group(F, gens)


def _prim(F):
    for a in range(2, F.size):
        if F.mult_order(a) == F.size - 1:
            return a
    return 1


def adjoint_trace(F):
    G = _gl2(F)
    rep = MatrixRep.from_image(G)
    lhs = ad0_trace(rep)
    rhs = ad0_trace_formula(F, rep.trace(), rep.det())
    bad = np.flatnonzero(lhs != rhs)
    return not len(bad), {"order": len(G), "mismatches": int(len(bad))}


def twist_sources():
    F3, F5 = ring(3), ring(5)
    return {
        "D4": close_group(F3, [[0, 2, 1, 0], [1, 0, 0, 2]]),
        "Q8": close_group(F3, [[1, 1, 1, 2], [0, 2, 1, 0]]),
        "S3": close_group(F5, [[0, 4, 1, 4], [0, 1, 1, 0]]),
        "SL2F3": close_group(F3, [[1, 1, 0, 1], [1, 0, 1, 1]]),
    }


def twist_recovery(name):
    F9 = ring(3, 1, 2)
    T = _gl2(F9)
    G = twist_sources()[name]
    reps = {}
    for h in oracles.homomorphisms(G, T):
        if is_semisimple(h):
            reps.setdefault((h.trace().tobytes(), h.det().tobytes()), h)
    reps = list(reps.values())
    checked, enlarged, ok = 0, 0, True
    for a in reps:
        for b in reps:
            if not np.array_equal(ad0_trace_formula(F9, a.trace(), a.det()),
                                  ad0_trace_formula(F9, b.trace(), b.det())):
                continue
            checked += 1
            found = recover_twist(a, b)
            if found is None:
                ok = False
                continue
            eta, K = found
            enlarged += K is not F9
            ta = a.trace() if K is F9 else embed(F9, K, a.trace())
            tb = b.trace() if K is F9 else embed(F9, K, b.trace())
            ok &= bool(np.array_equal(ta, K.mul(eta.values, tb)))
    return ok and checked > 0, {"representations": len(reps), "pairs": checked,
                                    "enlarged": enlarged}


# ---------------------------------------------------------------- 6, 7

def E_is_fixed_field(label):
    rb = bundled.residual_examples()[label]
    F = rb.ring
    E = compute_E(rb.pseudorep())
    tw = residual_twists(rb)
    allel = F.elements()
    fixed = np.ones(len(allel), dtype=bool)
    for s in tw.group.sigmas():
        fixed &= s.apply(allel) == allel
    ok = set(allel[fixed].tolist()) == set(subfield_elements(F, E.degree).tolist())
    return ok, {"E_degree": E.degree, "sigmas": len(tw.group.sigmas())}


def sigma_di_size(label, expected):
    tw = residual_twists(bundled.residual_examples()[label])
    return len(tw.sigma_di) == expected, {"sigma_di": len(tw.sigma_di), "expected": expected}


# ---------------------------------------------------------------- 8, 9

def roots_of_unity_lift(spec, k):
    R = ring(*spec)
    F = R.residue_field
    brute = oracles.roots_of_unity_oracle(R, k)
    res = [a for a in range(F.size) if int(F.pow(a, k)) == 1]
    lifted = sorted(int(v) for v in R.teich(np.array(res)))
    fast = roots_of_unity(R, k)
    ok = brute == lifted == fast
    return ok, {"count": len(brute)}


def grading_checks():
    R = ring(3, 2, 2)
    X = [frobenius_power(R, 0), frobenius_power(R, 1)]
    g = grading_from_automorphisms(R, X)
    checks = g.check()
    plus, minus = involution_split(R, X[1])
    checks["plus_minus_direct"] = (plus + minus).size == R.size and plus.size * minus.size == R.size
    checks["minus_squared_in_plus"] = minus.times(minus).issubset(plus)
    return all(checks.values()), checks


# ---------------------------------------------------------------- 10, 11

def twist_level(n):
    rho = bundled.borel_mod_3(n)
    R = rho.ring
    G = rho.source
    base = level_detector(G)
    nine = ideal_span(R, [9 % R.mod])
    labels, rows = G.character_table(R)
    seen = set()
    ok = base.ideal == ideal_span(R, [3])
    for row in rows:
        H = rho.twist(Character(G, R, row[labels])).image_group()
        key = H.keys().tobytes()
        if key in seen:
            continue
        seen.add(key)
        ok &= nine.issubset(level_detector(H).ideal)
    return bool(ok), {"order": len(G), "distinct_twisted_images": len(seen)}


def sl2_contained(rho):
    R = rho.ring
    G = rho.source
    Gamma = G.subgroup(np.flatnonzero(in_SR1(R, G.elements)))
    dec = decompose_lie(pink_filtration(Gamma, 1)[0])
    I1_is_m = dec.decomposable and dec.I == R.maximal_ideal()
    S = congruence_subgroup(R, Span.whole(R))
    labels, rows = G.character_table(R)
    seen = set()
    ok = True
    for row in rows:
        H = rho.twist(Character(G, R, row[labels])).image_group()
        key = H.keys().tobytes()
        if key in seen:
            continue
        seen.add(key)
        ok &= bool(np.all(H.contains(S.elements)))
    return bool(ok and (I1_is_m or R.is_field)), {"order": len(G), "I1_is_m": bool(I1_is_m),
                                                  "distinct_twisted_images": len(seen)}


# ---------------------------------------------------------------- 12, 13

def generalized_cst():
    rho = bundled.sl2_times_unit_scalars()
    A = rho.ring
    sigma = bundled.cube_root_twist_automorphism()
    eta = bundled.scalar_ratio_character(rho, sigma)
    pr = rho.pseudorep()
    holds = satisfies_twist(pr, sigma, eta)
    mult = Character(rho.source, A, eta).is_multiplicative()
    Z9 = Span.of(A, [1])
    tg = twist_group(pr, [sigma], coefficient_subring=Z9)
    flagged = [p.generalized for p in tg if np.array_equal(p.eta.values, eta)]
    R9 = ring(3, 2)
    base = MatrixRep.from_generators(R9, [[1, 1, 0, 1], [1, 0, 1, 1]])
    tg9 = twist_group(base.pseudorep(), coefficient_subring=Span.whole(R9))
    plain = [p for p in tg9 if not p.generalized]
    only_trivial = len(plain) == 1 and plain[0].sigma.is_identity() and plain[0].eta.is_trivial()
    ok = holds and mult and flagged == [True] and only_trivial
    return ok, {"equations": holds, "eta_multiplicative": mult, "flagged_generalized": flagged,
                "coefficient_ring_twists": len(plain)}


def small_j_lifting():
    rho = bundled.sl2_times_teichmuller_scalars()
    R = rho.ring
    tg = twist_group(rho.pseudorep())
    E = compute_E(rho.reduce().pseudorep())
    G = rho.image_group()
    Gamma = G.subgroup(np.flatnonzero(in_SR1(R, G.elements)))
    dec = decompose_lie(pink_filtration(Gamma, 1)[0])
    J = j_span(R, dec.I, dec.B, E.degree, False)
    small = j_smallness(R, J, R.f, E.degree).small
    red = reduce_twists(tg)
    fixed = fixed_subring(R, tg.sigmas())
    lifted = generated_subring(R, dec.I.basis(), base="W(E)", degree=E.degree)
    ok = small and fixed == lifted
    return ok, {"small": small, "kernel": len(red.kernel), "fixed_size": fixed.size,
                "W(E)[I1]_size": lifted.size}


# ---------------------------------------------------------------- 14

ORACLE_RINGS = [
    (3, 2, 1, None), (3, 3, 1, None), (3, 6, 1, None), (3, 1, 2, None), (3, 2, 2, None),
    (3, 3, 2, None), (3, 1, 3, None), (3, 1, 6, None), (3, 1, 2, [0, 0, 1]),
    (3, 1, 2, [0, 0, 0, 1]), (3, 1, 1, [0, 0, 1]), (3, 1, 1, [0, 0, 0, 0, 0, 0, 1]),
    (3, 2, 1, [-3, 0, 1]), (3, 2, 1, [-3, 0, 0, 1]), (5, 1, 1, None), (5, 2, 1, None),
    (5, 1, 2, None), (5, 2, 2, None), (5, 1, 1, [0, 0, 1]), (5, 1, 1, [0, 0, 0, 1]),
    (5, 1, 2, [0, 0, 1]), (7, 1, 1, None), (7, 2, 1, None), (7, 1, 2, None),
    (7, 3, 1, None), (7, 1, 1, [0, 0, 1]), (7, 1, 1, [0, 0, 0, 1]),
]

PINK_AMBIENTS = [
    (3, 2, 1, None), (3, 1, 1, [0, 0, 1]), (3, 3, 1, None), (3, 1, 2, [0, 0, 1]),
    (3, 1, 1, [0, 0, 0, 1]), (5, 2, 1, None), (5, 1, 1, [0, 0, 1]), (7, 2, 1, None),
    (7, 1, 1, [0, 0, 1]),
]


def _spec_name(spec):
    p, n, f, ext = spec
    name = f"p{p}n{n}f{f}"
    if ext:
        name += "e" + str(len(ext) - 1) + "c" + str(ext[0] % (p ** n))
    return name


def _pink_matches(R, elements, depth=3):
    H = close_group(R, elements)
    fast = pink_filtration(H, depth)
    slow = oracles.pink_filtration_oracle(R, H.elements, depth)
    return all(_as_set(a.elements()) == b for a, b in zip(fast, slow))


def oracle_pink(spec, sample=40, seed=7):
    R = ring(*spec)
    G = congruence_subgroup(R, R.maximal_ideal())
    N = len(G)
    checked = 0
    ok = _pink_matches(R, G.elements)
    checked += 1
    # every cyclic subgroup
    seen = set()
    for g in range(N):
        H = close_group(R, G.elements[[g]])
        key = H.keys().tobytes()
        if key in seen:
            continue
        seen.add(key)
        ok &= _pink_matches(R, G.elements[[g]])
        checked += 1
    # two-generated subgroups: all pairs for small ambients, a seeded sample otherwise
    if N <= 27:
        pairs = [(i, j) for i in range(N) for j in range(i + 1, N)]
    else:
        rng = np.random.default_rng(seed)
        pairs = [tuple(int(v) for v in rng.integers(0, N, 2)) for _ in range(sample)]
    for i, j in pairs:
        ok &= _pink_matches(R, G.elements[[i, j]])
        checked += 1
    return bool(ok), {"ambient": N, "subgroups": checked}


def oracle_roots(spec):
    R = ring(*spec)
    ks = [k for k in (2, 4, 8) if k % R.p]
    ok = all(roots_of_unity(R, k) == oracles.roots_of_unity_oracle(R, k) for k in ks)
    return ok, {"ring_size": R.size, "k": ks}


def oracle_automorphisms(spec):
    R = ring(*spec)
    fast = sorted(a.key() for a in ring_automorphisms(R))
    slow = sorted(a.key() for a in oracles.ring_automorphisms_oracle(R))
    return fast == slow, {"ring_size": R.size, "automorphisms": len(fast)}


TWIST_ORACLE_LABELS = ("R1", "R2", "D1", "D2", "D3", "T1", "T2", "T3", "O1", "O2",
                       "dihedral-Z9", "dihedral-Z25", "dihedral-F9u2", "sl2-Z9")


def twist_oracle_inputs():
    out = {k: v for k, v in bundled.residual_examples().items() if len(v.source) <= 729}
    Z9, Z25 = ring(3, 2), ring(5, 2)
    F9u = ring(3, 1, 2, ext=[0, 0, 1])
    out["dihedral-Z9"] = MatrixRep.from_generators(Z9, [[2, 0, 0, 1], [0, 1, 1, 0]])
    out["dihedral-Z25"] = MatrixRep.from_generators(
        Z25, [[int(Z25.teich(2)), 0, 0, 1], [0, 1, 1, 0]])
    out["dihedral-F9u2"] = MatrixRep.from_generators(F9u, [[F9u.x, 0, 0, 1], [0, 1, 1, 0]])
    out["sl2-Z9"] = MatrixRep.from_generators(Z9, [[1, 1, 0, 1], [1, 0, 1, 1]])
    return out


def oracle_twists(label):
    rho = twist_oracle_inputs()[label]
    if len(rho.source) > 729:
        raise ValueError("oracle input exceeds the ambient size bound")
    pr = rho.pseudorep()
    auts = oracles.ring_automorphisms_oracle(rho.ring)
    fast = sorted((p.sigma.key(), tuple(int(v) for v in p.eta.values))
                  for p in twist_group(pr, ring_automorphisms(rho.ring)))
    slow = oracles.twist_group_oracle(pr, auts)
    return fast == slow, {"group": len(rho.source), "pairs": len(fast)}


# ---------------------------------------------------------------- registry

def instances(perturb=False):
    out = []

    def add(crit, name, fn, *args):
        out.append(Instance(f"c{crit:02d}-{name}", crit, lambda: fn(*args)))

    Z27 = ring(3, 3)
    add(1, "congruence-lie-Z27", congruence_lie, perturbed_ring(Z27) if perturb else Z27)
    add(1, "congruence-lie-F9t3", congruence_lie, ring(3, 1, 2, ext=[0, 0, 0, 1]))
    add(2, "commutator-congruence-Z27", commutator_congruence)
    add(2, "sl2-perfect-F5", perfect_sl2, ring(5))
    add(2, "sl2-perfect-F9", perfect_sl2, ring(3, 1, 2))
    for seed in range(10):
        add(3, f"lie-group-correspondence-seed{seed}", pink_correspondence, seed)
    add(4, "adjoint-trace-GL2F5", adjoint_trace, ring(5))
    add(4, "adjoint-trace-GL2F9", adjoint_trace, ring(3, 1, 2))
    for name in ("D4", "Q8", "S3", "SL2F3"):
        add(5, f"twist-recovery-{name}", twist_recovery, name)
    for label in ("R1", "R2", "D1", "D2", "D3", "T1", "T2", "T3", "O1", "O2", "L1", "L2"):
        add(6, f"E-fixed-field-{label}", E_is_fixed_field, label)
    add(7, "sigma-di-T2", sigma_di_size, "T2", 1)
    add(7, "sigma-di-D1", sigma_di_size, "D1", 2)
    add(7, "sigma-di-D3", sigma_di_size, "D3", 4)
    for name, spec in (("Z9", (3, 2, 1, None)), ("Z27", (3, 3, 1, None)),
                       ("F9t2", (3, 1, 2, [0, 0, 1]))):
        for k in (2, 4, 8):
            add(8, f"roots-of-unity-{name}-k{k}", roots_of_unity_lift, spec, k)
    add(9, "grading-WF9", grading_checks)
    add(10, "twist-level-Z9", twist_level, 2)
    add(10, "twist-level-Z27", twist_level, 3)
    add(11, "sl2-full-F7", lambda: sl2_contained(bundled.full_image_F7()))
    add(11, "sl2-full-Z49", lambda: sl2_contained(bundled.full_image_Z49()))
    add(12, "generalized-cst", generalized_cst)
    add(13, "small-J-lifting", small_j_lifting)
    for spec in PINK_AMBIENTS:
        add(14, f"oracle-lie-filtration-{_spec_name(spec)}", oracle_pink, spec)
    for spec in ORACLE_RINGS:
        add(14, f"oracle-roots-{_spec_name(spec)}", oracle_roots, spec)
        add(14, f"oracle-automorphisms-{_spec_name(spec)}", oracle_automorphisms, spec)
    for label in TWIST_ORACLE_LABELS:
        add(14, f"oracle-twists-{label}", oracle_twists, label)
    out.sort(key=lambda inst: inst.id)
    return out


def run_instance(inst):
    start = time.perf_counter()
    try:
        ok, detail = inst.run()
    except Exception as exc:          # a crash is a failed instance
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return Result(inst.id, inst.criterion, bool(ok), time.perf_counter() - start, detail)


def run_suite(pattern=None, perturb=False, criteria=None, echo=None):
    """Run every selected instance; returns the results in id order."""
    rx = re.compile(pattern) if pattern else None
    results = []
    for inst in instances(perturb):
        if rx and not rx.search(inst.id):
            continue
        if criteria is not None and inst.criterion not in criteria:
            continue
        res = run_instance(inst)
        if echo:
            echo(res.line())
        results.append(res)
    return results
