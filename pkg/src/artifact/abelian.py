"""Characters of a finite abelian group given by its multiplication table."""

import numpy as np


def element_orders(table, identity):
    m = len(table)
    orders = np.zeros(m, dtype=np.int64)
    cur = np.arange(m)
    for k in range(1, m + 1):
        hit = (cur == identity) & (orders == 0)
        orders[hit] = k
        if (orders > 0).all():
            break
        cur = table[cur, np.arange(m)]
    return orders


def characters(table, identity, roots, mul, one):
    """Every homomorphism from the group into a multiplicative target.

    ``roots(k)`` returns the array of target elements x with x**k == 1 and
    ``mul`` multiplies target arrays elementwise.  The group is grown one
    generator at a time; a character on the current subgroup H extends to
    <H, g> in one way for each solution v of v**m = chi(g**m), where m is the
    order of g modulo H.
    """
    table = np.asarray(table)
    m = len(table)
    members = np.zeros(m, dtype=bool)
    members[identity] = True
    H = np.array([identity])
    chars = [np.full(m, -1, dtype=np.int64)]
    chars[0][identity] = one
    orders = element_orders(table, identity)
    while len(H) < m:
        g = int(np.flatnonzero(~members)[0])
        # powers g^j until g^j lands in H
        pw = [identity]
        cur = g
        while not members[cur]:
            pw.append(cur)
            cur = int(table[cur, g])
        order_mod_h = len(pw)
        landing = cur
        cand_all = roots(int(orders[g]))
        new_chars = []
        for chi in chars:
            target = chi[landing]
            # v**order_mod_h == target
            v_pow = _pow_array(cand_all, order_mod_h, mul, one)
            sols = cand_all[v_pow == target]
            for v in sols:
                ext = chi.copy()
                vj = one
                for j in range(order_mod_h):
                    idx = table[H, pw[j]]
                    ext[idx] = mul(chi[H], np.full(len(H), vj))
                    vj = int(mul(np.array([vj]), np.array([v]))[0])
                new_chars.append(ext)
        newH = table[H[:, None], np.array(pw)[None, :]].ravel()
        members[newH] = True
        H = np.flatnonzero(members)
        chars = new_chars
    return chars


def _pow_array(x, k, mul, one):
    result = np.full(len(x), one, dtype=np.int64)
    base = np.asarray(x, dtype=np.int64)
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result
