"""Naive reference implementations, written from the defining formulas
without any of the index tricks used in the package.  Tests compare the
package output against these."""

from fractions import Fraction


def fn_comul(G, x):
    """{(y, z): 1 for y z = x} by brute force."""
    return {(y, z): 1 for y in range(G.size) for z in range(G.size) if G.mul[y][z] == x}


def fn_unit(G, j):
    return {z: 1 for z in range(G.size) if G.mul[z][G.inv_i[z]] == j}


def bicross_tables(mp):
    """Structure maps of kM ▷◀ k(G) keyed by (s, u) pairs."""
    G, M, R, L = mp.G, mp.M, mp.act_right, mp.act_left
    basis = [(s, u) for s in range(M.size) for u in range(G.size)]
    mul = {}
    for (s, u) in basis:
        for (t, v) in basis:
            mul[(s, u), (t, v)] = {(M.mul[s][t], v): 1} if u == R[t][v] else {}
    comul = {}
    for (s, u) in basis:
        d = {}
        for x in range(G.size):
            for y in range(G.size):
                if G.mul[x][y] == u:
                    d[(s, x), (L[s][x], y)] = 1
        comul[(s, u)] = d
    anti = {(s, u): {(M.inv_i[L[s][u]], G.inv_i[R[s][u]]): 1} for (s, u) in basis}
    counit = {(s, u): ({(M.mul[s][M.inv_i[s]], u): 1} if u in G.J else {}) for (s, u) in basis}
    unit = {(j, n): {(j, z): 1 for z in range(G.size) if G.mul[z][G.inv_i[z]] == n}
            for j in M.J for n in G.J}
    return mul, comul, anti, counit, unit


def dual_tables(mp):
    """Structure maps of k(M) ◀▶ kG keyed by (s, u) pairs."""
    G, M, R, L = mp.G, mp.M, mp.act_right, mp.act_left
    basis = [(s, u) for s in range(M.size) for u in range(G.size)]
    mul = {}
    for (s, u) in basis:
        for (t, v) in basis:
            mul[(s, u), (t, v)] = {(s, G.mul[u][v]): 1} if L[s][u] == t else {}
    comul = {}
    for (s, u) in basis:
        d = {}
        for a in range(M.size):
            for b in range(M.size):
                if M.mul[a][b] == s:
                    d[(a, R[b][u]), (b, u)] = 1
        comul[(s, u)] = d
    anti = {(s, u): {(M.inv_i[L[s][u]], G.inv_i[R[s][u]]): 1} for (s, u) in basis}
    counit = {(s, u): ({(s, G.mul[u][G.inv_i[u]]): 1} if s in M.J else {}) for (s, u) in basis}
    unit = {(j, n): {(a, n): 1 for a in range(M.size) if M.mul[a][M.inv_i[a]] == j}
            for j in M.J for n in G.J}
    return mul, comul, anti, counit, unit


def tables_of(H, ng):
    """Package tables re-keyed by (s, u) for comparison with the oracles."""
    key = lambda k: divmod(k, ng)
    vec = lambda v: {key(k): Fraction(c) for k, c in v.items()}
    mul = {(key(a), key(b)): vec(H.mul_table[a][b]) for a in range(H.dim) for b in range(H.dim)}
    comul = {key(a): {(key(k), key(l)): c for (k, l), c in H.comul_table[a].items()}
             for a in range(H.dim)}
    anti = {key(a): vec(H.antipode_table[a]) for a in range(H.dim)}
    counit = {key(a): vec(H.counit_table[a]) for a in range(H.dim)}
    unit = {key(j): vec(H.unit_table[j]) for j in H.j_basis}
    return mul, comul, anti, counit, unit


def factorization_pair(X, G_elems, M_elems):
    """Matched pair from a group X = G·M with G ∩ M = {e} (both subgroups).

    s·u is rewritten as (s▷u)(s◁u) with s▷u in G and s◁u in M by searching
    the table of X.
    """
    from almosthopf import almost_group as ag
    from almosthopf import matched_pair as mpm

    def sub(elems):
        pos = {x: k for k, x in enumerate(elems)}
        table = [[pos[X.mul[a][b]] for b in elems] for a in elems]
        return ag.from_group(table, labels=[X.elements[x] for x in elems])

    G, M = sub(G_elems), sub(M_elems)
    R = [[None] * len(G_elems) for _ in M_elems]
    L = [[None] * len(G_elems) for _ in M_elems]
    for si, s in enumerate(M_elems):
        for ui, u in enumerate(G_elems):
            su = X.mul[s][u]
            hits = [(gi, mi) for gi, g in enumerate(G_elems) for mi, m in enumerate(M_elems)
                    if X.mul[g][m] == su]
            assert len(hits) == 1
            R[si][ui], L[si][ui] = hits[0]
    return mpm.make_pair(G, M, R, L)


def s4_factorization():
    """S4 = S3 · Z4 with S3 the permutations fixing 3 and Z4 generated by a 4-cycle.

    Neither factor is normal, so both actions are nontrivial.
    """
    from almosthopf import almost_group as ag
    X = ag.symmetric_group(4)
    S3 = [k for k, p in enumerate(X.elements) if p[3] == "3"]
    Z4 = [X.index[p] for p in ("0123", "1230", "2301", "3012")]
    return X, factorization_pair(X, S3, Z4)
