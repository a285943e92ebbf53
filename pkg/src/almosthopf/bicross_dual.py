"""
Bicrossproduct almost Hopf algebras from a matched pair, their duals, the
star operation, and self-duality for mutually inverse matched pairs.

For a matched pair (G, M) with actions ▷, ◁:

* ``H = kM ▷◀ k(G)`` has basis ``s ⊗ δ_u`` (label ``Pair(GroupElem(s), DeltaElem(u))``),
* ``H' = k(M) ◀▶ kG`` has basis ``δ_s ⊗ u`` (label ``Pair(DeltaElem(s), GroupElem(u))``),

both indexed by ``s * |G| + u``, and paired by ``<δ_s ⊗ u, t ⊗ δ_v> = δ_{s,t} δ_{u,v}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import almost_group as agm
from . import hopf_core as hc
from .exact_linear import DeltaElem, GroupElem, LinComb, Pair
from .errors import AxiomError, StructureError
from .hopf_core import (ONE, AlmostHopfStructure, CheckResult, HopfReport,
                        _names, _prune, _Recorder, product_after, vadd,
                        vapply, vtensor)
from .matched_pair import MatchedPair, doublecross, require_matched


@dataclass(frozen=True, eq=False)
class BicrossAlgebra(AlmostHopfStructure):
    pair: MatchedPair | None = None


@dataclass(frozen=True, eq=False)
class DualBicrossAlgebra(AlmostHopfStructure):
    pair: MatchedPair | None = None


def _sizes(mp):
    return mp.G.size, mp.M.size


def bicrossproduct(mp: MatchedPair) -> BicrossAlgebra:
    """``kM ▷◀ k(G)``.

    (s⊗δ_u)(t⊗δ_v) = δ_{u, t▷v} st⊗δ_v;
    Δ(s⊗δ_u) = Σ_{xy=u} s⊗δ_x ⊗ (s◁x)⊗δ_y;
    S(s⊗δ_u) = (s◁u)^i ⊗ δ_{(s▷u)^i};
    ε(s⊗δ_u) = ss^i⊗δ_u for u in J_G, else 0;
    η(j⊗δ_n) = Σ_{zz^i=n} j⊗δ_z.
    """
    require_matched(mp)
    G, M = mp.G, mp.M
    ng, nm = _sizes(mp)
    R, L = mp.act_right, mp.act_left
    idx = lambda s, u: s * ng + u
    N = ng * nm
    basis = tuple(Pair(GroupElem(s), DeltaElem(u)) for s in range(nm) for u in range(ng))
    names = tuple(f"{M.elements[s]}⊗δ_{G.elements[u]}" for s in range(nm) for u in range(ng))

    mul = [[{} for _ in range(N)] for _ in range(N)]
    for t in range(nm):
        for v in range(ng):
            u = R[t][v]
            for s in range(nm):
                mul[idx(s, u)][idx(t, v)] = {idx(M.mul[s][t], v): ONE}
    comul = [dict() for _ in range(N)]
    for s in range(nm):
        for x in range(ng):
            sx = L[s][x]
            for y in range(ng):
                comul[idx(s, G.mul[x][y])][(idx(s, x), idx(sx, y))] = ONE
    antipode = tuple({idx(M.inv_i[L[s][u]], G.inv_i[R[s][u]]): ONE}
                     for s in range(nm) for u in range(ng))
    counit = tuple({idx(M.mul[s][M.inv_i[s]], u): ONE} if G.j_mask[u] else {}
                   for s in range(nm) for u in range(ng))
    zs_of = _norm_fibres(G)
    j_basis = tuple(sorted(idx(j, n) for j in M.j_sorted for n in G.j_sorted))
    unit = {idx(j, n): {idx(j, z): ONE for z in zs_of.get(n, ())}
            for j in M.j_sorted for n in G.j_sorted}
    return BicrossAlgebra(basis, j_basis, tuple(tuple(r) for r in mul), tuple(comul),
                          counit, unit, antipode, names, "bicross", mp)


def dual_bicrossproduct(mp: MatchedPair) -> DualBicrossAlgebra:
    """``k(M) ◀▶ kG``.

    (δ_s⊗u)(δ_t⊗v) = δ_{s◁u, t} δ_s⊗uv;
    Δ(δ_s⊗u) = Σ_{ab=s} δ_a⊗(b▷u) ⊗ δ_b⊗u;
    S(δ_s⊗u) = δ_{(s◁u)^i} ⊗ (s▷u)^i;
    ε(δ_s⊗u) = δ_s⊗uu^i for s in J_M, else 0;
    η(δ_j⊗n) = Σ_{aa^i=j} δ_a⊗n.
    """
    require_matched(mp)
    G, M = mp.G, mp.M
    ng, nm = _sizes(mp)
    R, L = mp.act_right, mp.act_left
    idx = lambda s, u: s * ng + u
    N = ng * nm
    basis = tuple(Pair(DeltaElem(s), GroupElem(u)) for s in range(nm) for u in range(ng))
    names = tuple(f"δ_{M.elements[s]}⊗{G.elements[u]}" for s in range(nm) for u in range(ng))

    mul = [[{} for _ in range(N)] for _ in range(N)]
    for s in range(nm):
        for u in range(ng):
            t = L[s][u]
            for v in range(ng):
                mul[idx(s, u)][idx(t, v)] = {idx(s, G.mul[u][v]): ONE}
    comul = [dict() for _ in range(N)]
    for a in range(nm):
        for b in range(nm):
            ab = M.mul[a][b]
            for u in range(ng):
                comul[idx(ab, u)][(idx(a, R[b][u]), idx(b, u))] = ONE
    antipode = tuple({idx(M.inv_i[L[s][u]], G.inv_i[R[s][u]]): ONE}
                     for s in range(nm) for u in range(ng))
    counit = tuple({idx(s, G.mul[u][G.inv_i[u]]): ONE} if M.j_mask[s] else {}
                   for s in range(nm) for u in range(ng))
    as_of = _norm_fibres(M)
    j_basis = tuple(sorted(idx(j, n) for j in M.j_sorted for n in G.j_sorted))
    unit = {idx(j, n): {idx(a, n): ONE for a in as_of.get(j, ())}
            for j in M.j_sorted for n in G.j_sorted}
    return DualBicrossAlgebra(basis, j_basis, tuple(tuple(r) for r in mul), tuple(comul),
                              counit, unit, antipode, names, "dualBicross", mp)


def _norm_fibres(X):
    """{n: [z with z z^i = n]} by full scan."""
    fib: dict = {}
    for z in range(X.size):
        fib.setdefault(X.mul[z][X.inv_i[z]], []).append(z)
    return fib


# ---------------------------------------------------------------- pairing

def _pair_key(label, primal):
    if not isinstance(label, Pair):
        raise StructureError(f"not a bicrossproduct basis label: {label!r}")
    a, b = label.left, label.right
    if primal and isinstance(a, GroupElem) and isinstance(b, DeltaElem):
        return a.index, b.index
    if not primal and isinstance(a, DeltaElem) and isinstance(b, GroupElem):
        return a.index, b.index
    side = "H (s⊗δ_u)" if primal else "H' (δ_s⊗u)"
    raise StructureError(f"label {label!r} is not a basis element of {side}")


def pairing(x: LinComb, y: LinComb) -> Fraction:
    """``<x, y>`` for x in H' and y in H, bilinear in both arguments."""
    ys: dict = {}
    for lab, c in y.items():
        ys[_pair_key(lab, True)] = c
    total = Fraction(0)
    for lab, c in x.items():
        d = ys.get(_pair_key(lab, False))
        if d:
            total += c * d
    return total


def _dual_index(Hd, H):
    """d[x] = the H index paired to 1 with H' index x (checked to be a bijection)."""
    if getattr(H, "pair", None) is not getattr(Hd, "pair", None):
        raise StructureError("H and H' come from different matched pairs")
    pos = {_pair_key(lab, True): k for k, lab in enumerate(H.basis)}
    d = []
    for lab in Hd.basis:
        key = _pair_key(lab, False)
        if key not in pos:
            raise StructureError(f"{lab!r} has no dual basis element")
        d.append(pos[key])
    if sorted(d) != list(range(H.dim)):
        raise StructureError("pairing is not perfect on the bases")
    return d


# ---------------------------------------------------------------- duality

def verify_duality(mp: MatchedPair, H=None, Hd=None, limit=5) -> HopfReport:
    """Check that H' and H are dual under the pairing, on all basis tuples.

    Counit/unit in both directions, antipodes, and product against coproduct
    in both directions.
    """
    H = H if H is not None else bicrossproduct(mp)
    Hd = Hd if Hd is not None else dual_bicrossproduct(mp)
    d = _dual_index(Hd, H)
    dinv = [0] * len(d)
    for x, y in enumerate(d):
        dinv[y] = x
    N = H.dim
    rep = HopfReport()
    fmt = lambda c: str(c)

    # <eps'(x), y> = <x, eta(y)>,  x in H', y in H_J
    rec = _Recorder(Hd, "counit_unit_duality", limit)
    rec.res.checked = N * len(H.j_basis)
    for x in range(N):
        ex = Hd.counit_table[x]
        for y in H.j_basis:
            lhs = ex.get(dinv[y], 0)
            rhs = H.unit_table[y].get(d[x], 0)
            if lhs != rhs:
                rec.fail((Hd.names[x], H.names[y]), fmt(lhs), fmt(rhs))
    rep.add(rec.res)

    # <eta'(x), y> = <x, eps(y)>,  x in H'_J, y in H
    rec = _Recorder(Hd, "unit_counit_duality", limit)
    rec.res.checked = len(Hd.j_basis) * N
    for x in Hd.j_basis:
        ux = Hd.unit_table[x]
        for y in range(N):
            lhs = ux.get(dinv[y], 0)
            rhs = H.counit_table[y].get(d[x], 0)
            if lhs != rhs:
                rec.fail((Hd.names[x], H.names[y]), fmt(lhs), fmt(rhs))
    rep.add(rec.res)

    # <S'(x), y> = <x, S(y)>
    rec = _Recorder(Hd, "antipode_duality", limit)
    rec.res.checked = N * N
    lhs = {(x, d[k]): c for x in range(N) for k, c in Hd.antipode_table[x].items()}
    rhs = {(dinv[k], y): c for y in range(N) for k, c in H.antipode_table[y].items()}
    for key in sorted(set(lhs) | set(rhs)):
        if lhs.get(key, 0) != rhs.get(key, 0):
            x, y = key
            rec.fail((Hd.names[x], H.names[y]), fmt(lhs.get(key, 0)), fmt(rhs.get(key, 0)))
    rep.add(rec.res)

    # <x x', y> = <x ⊗ x', Δ y>
    rec = _Recorder(Hd, "product_coproduct_duality", limit)
    rec.res.checked = N ** 3
    lhs: dict = {}
    for (x, x2), v in Hd.mul_nonzero.items():
        for k, c in v.items():
            lhs[(x, x2, d[k])] = c
    rhs = {}
    for y in range(N):
        for (a, b), c in H.comul_table[y].items():
            rhs[(dinv[a], dinv[b], y)] = c
    for key in sorted(set(lhs) | set(rhs)):
        if lhs.get(key, 0) != rhs.get(key, 0):
            x, x2, y = key
            rec.fail((Hd.names[x], Hd.names[x2], H.names[y]),
                     fmt(lhs.get(key, 0)), fmt(rhs.get(key, 0)))
    rep.add(rec.res)

    # <x, y y'> = <Δ' x, y ⊗ y'>
    rec = _Recorder(Hd, "coproduct_product_duality", limit)
    rec.res.checked = N ** 3
    lhs = {}
    for (y, y2), v in H.mul_nonzero.items():
        for k, c in v.items():
            lhs[(dinv[k], y, y2)] = c
    rhs = {}
    for x in range(N):
        for (a, b), c in Hd.comul_table[x].items():
            rhs[(x, d[a], d[b])] = c
    for key in sorted(set(lhs) | set(rhs)):
        if lhs.get(key, 0) != rhs.get(key, 0):
            x, y, y2 = key
            rec.fail((Hd.names[x], H.names[y], H.names[y2]),
                     fmt(lhs.get(key, 0)), fmt(rhs.get(key, 0)))
    rep.add(rec.res)
    return rep


# ---------------------------------------------------------------- star

def star_table(mp: MatchedPair):
    """(s⊗δ_u)* = s^i ⊗ δ_{s▷u}, as an index table on H."""
    ng, nm = _sizes(mp)
    return tuple({mp.M.inv_i[s] * ng + mp.act_right[s][u]: ONE}
                 for s in range(nm) for u in range(ng))


def star_dual_table(mp: MatchedPair):
    """(δ_s⊗u)* = δ_{s◁u} ⊗ u^i, as an index table on H'."""
    ng, nm = _sizes(mp)
    return tuple({mp.act_left[s][u] * ng + mp.G.inv_i[u]: ONE}
                 for s in range(nm) for u in range(ng))


def star(H: BicrossAlgebra, x) -> LinComb:
    """Star on H, extended linearly to combinations (the scalars are rational)."""
    tbl = star_table(H.pair)
    x = x if isinstance(x, LinComb) else LinComb.basis(x)
    return H.lc(vapply(tbl, H.to_vec(x)))


def star_dual(Hd: DualBicrossAlgebra, x) -> LinComb:
    tbl = star_dual_table(Hd.pair)
    x = x if isinstance(x, LinComb) else LinComb.basis(x)
    return Hd.lc(vapply(tbl, Hd.to_vec(x)))


def check_star_suite(H: AlmostHopfStructure, tbl, limit=5) -> HopfReport:
    """Involution, anti-multiplicativity, and compatibility with Δ, η, ε, S."""
    rep = HopfReport()
    N = H.dim
    r1 = hc._r1(H)

    rec = _Recorder(H, "star_involution", limit)
    rec.res.checked = N
    for x in range(N):
        back = vapply(tbl, tbl[x])
        if back != {x: ONE}:
            rec.fail(_names(H, (x,)), r1(back), H.names[x])
    rep.add(rec.res)

    rec = _Recorder(H, "star_antimultiplicative", limit)
    rec.res.checked = N * N
    lhs = _prune({k: vapply(tbl, v) for k, v in H.mul_nonzero.items()})
    rhs = {(x, y): v for (y, x), v in product_after(H, tbl, tbl).items()}
    rec.compare(lhs, rhs, lambda k: _names(H, k), r1)
    rep.add(rec.res)

    rec = _Recorder(H, "star_comultiplicative", limit)
    rec.res.checked = N
    for x in range(N):
        lhs = vapply(H.comul_table, tbl[x])
        rhs: dict = {}
        for (a, b), c in H.comul_table[x].items():
            vadd(rhs, vtensor(tbl[a], tbl[b]), c)
        if lhs != rhs:
            rec.fail(_names(H, (x,)), H.render(H.lc2(lhs)), H.render(H.lc2(rhs)))
    rep.add(rec.res)

    jset = set(H.j_basis)
    rec = _Recorder(H, "star_unit", limit)
    rec.res.checked = len(H.j_basis)
    for a in H.j_basis:
        lhs = vapply(tbl, H.unit_table[a])
        sa = tbl[a]
        if any(k not in jset for k in sa):
            rec.fail(_names(H, (a,)), r1(sa), "star leaves H_J")
            continue
        rhs = hc._eta_of(H, sa)
        if lhs != rhs:
            rec.fail(_names(H, (a,)), r1(lhs), r1(rhs))
    rep.add(rec.res)

    rec = _Recorder(H, "star_counit", limit)
    rec.res.checked = N
    for x in range(N):
        lhs = vapply(H.counit_table, tbl[x])
        rhs = vapply(tbl, H.counit_table[x])
        if lhs != rhs:
            rec.fail(_names(H, (x,)), r1(lhs), r1(rhs))
    rep.add(rec.res)

    rec = _Recorder(H, "star_antipode", limit)
    rec.res.checked = N
    for x in range(N):
        lhs = vapply(tbl, H.antipode_table[x])
        rhs = vapply(H.antipode_table, tbl[x])
        if lhs != rhs:
            rec.fail(_names(H, (x,)), r1(lhs), r1(rhs))
    rep.add(rec.res)
    return rep


def verify_star(mp: MatchedPair, H=None, Hd=None, tbl=None, limit=5) -> HopfReport:
    """Star identities on H (and the involution on H').

    ``tbl`` overrides the star table of H (used for negative controls).
    """
    H = H if H is not None else bicrossproduct(mp)
    Hd = Hd if Hd is not None else dual_bicrossproduct(mp)
    rep = check_star_suite(H, tbl if tbl is not None else star_table(mp), limit)
    dual_tbl = star_dual_table(mp)
    rec = _Recorder(Hd, "star_dual_involution", limit)
    rec.res.checked = Hd.dim
    for x in range(Hd.dim):
        back = vapply(dual_tbl, dual_tbl[x])
        if back != {x: ONE}:
            rec.fail(_names(Hd, (x,)), hc._r1(Hd)(back), Hd.names[x])
    rep.add(rec.res)
    return rep


# ---------------------------------------------------------------- antipode props

def verify_antipode_props(H: AlmostHopfStructure, limit=5) -> HopfReport:
    """S reverses product and coproduct; εS = S_J ε and Sη = η S_J."""
    rep = HopfReport()
    rep.add(hc.check_antipode_antimul(H, limit))
    rep.add(hc.check_antipode_anticomul(H, limit))
    ce, ue = hc.check_antipode_unit_counit(H, limit)
    rep.add(ce)
    rep.add(ue)
    return rep


def verify_bicross(mp: MatchedPair, limit=5) -> HopfReport:
    """Everything provable about H and H' for one matched pair, in one report."""
    H = bicrossproduct(mp)
    Hd = dual_bicrossproduct(mp)
    rep = HopfReport()
    rep.merge(hc.verify_hopf(H, limit), "H.")
    rep.merge(hc.verify_hopf(Hd, limit), "H'.")
    rep.merge(verify_antipode_props(H, limit), "H.")
    rep.merge(verify_duality(mp, H, Hd, limit), "duality.")
    rep.merge(verify_star(mp, H, Hd, limit=limit), "star.")
    return rep


# ---------------------------------------------------------------- mutual inverse

@dataclass(frozen=True)
class InverseData:
    inv_G: tuple        # u in G -> u^{-1} in M
    inv_M: tuple        # s in M -> s^{-1} in G
    dx_inverse: tuple   # inverse in the doublecross group, on indices u*|M| + s


def derive_inverse_data(mp: MatchedPair) -> InverseData:
    """Brute-force inverse data.

    ``dx_inverse`` comes from the doublecross table (which must be a group).
    ``inv_G``/``inv_M`` need G and M to be groups on the same element labels:
    the inverse of u in G, read as an element of M, and vice versa.
    """
    D = doublecross(mp)
    e = agm.find_identity(D.mul)
    if e is None:
        raise AxiomError("doublecross product has no identity, so it is not a group")
    dxi = agm.group_inverses(D.mul, e)
    if dxi is None:
        raise AxiomError("doublecross product is not a group (missing inverses)")
    G, M = mp.G, mp.M
    if sorted(G.elements) != sorted(M.elements):
        raise StructureError("cannot derive inv_G/inv_M: G and M have different labels")
    inv = []
    for X in (G, M):
        eX = agm.find_identity(X.mul)
        gi = agm.group_inverses(X.mul, eX) if eX is not None else None
        if gi is None:
            raise AxiomError("cannot derive inv_G/inv_M: G and M must be groups")
        inv.append(gi)
    inv_G = tuple(M.index[G.elements[inv[0][u]]] for u in range(G.size))
    inv_M = tuple(G.index[M.elements[inv[1][s]]] for s in range(M.size))
    return InverseData(inv_G, inv_M, tuple(dxi))


class _ElemRecorder(_Recorder):
    def __init__(self, name, limit):
        self.res = CheckResult(name)
        self.limit = limit


def check_mutually_inverse(mp: MatchedPair, data: InverseData, limit=5) -> HopfReport:
    """The five mutual-inverse conditions, each as an exhaustive check.

    * ``dx_group``: G⋈M has an identity and ``dx_inverse`` is a two-sided inverse.
    * ``inverse_carriers``: inv_G lands in M and inv_M in G; they are mutually
      inverse, reverse products, and send identity to identity.
    * ``inverse_on_J``: inv_G restricts to a bijection J_G -> J_M.
    * ``inverse_commutes_with_i``: (x^{-1})^i = (x^i)^{-1} in G⋈M, G and M.
    * ``inverse_actions``: u^{-1}▷s^{-1} = (s◁u)^{-1} and u^{-1}◁s^{-1} = (s▷u)^{-1}.
    """
    G, M = mp.G, mp.M
    ng, nm = _sizes(mp)
    gl, ml = G.elements, M.elements
    D = doublecross(mp)
    dl = D.elements
    rep = HopfReport()
    iG, iM, dxi = tuple(data.inv_G), tuple(data.inv_M), tuple(data.dx_inverse)

    grp = _ElemRecorder("dx_group", limit)
    grp.res.checked = D.size
    e = agm.find_identity(D.mul)
    dx_ok = len(dxi) == D.size and all(isinstance(v, int) and 0 <= v < D.size for v in dxi)
    if e is None:
        grp.fail(("identity",), "none", "an identity of G⋈M")
    elif not dx_ok:
        grp.fail(("dx_inverse",), f"{len(dxi)} entries", f"{D.size} indices into G⋈M")
    else:
        for x in range(D.size):
            if D.mul[x][dxi[x]] != e or D.mul[dxi[x]][x] != e:
                grp.fail((dl[x],), f"{dl[D.mul[x][dxi[x]]]}, {dl[D.mul[dxi[x]][x]]}", dl[e])
    rep.add(grp.res)

    car = _ElemRecorder("inverse_carriers", limit)
    car.res.checked = ng + nm + ng * ng + nm * nm
    if not _in_range(mp, data):
        car.fail(("inv_G", "inv_M"), "values outside the carriers", "inv_G: G->M, inv_M: M->G")
        rep.add(car.res)
        for name in ("inverse_on_J", "inverse_commutes_with_i", "inverse_actions"):
            r = CheckResult(name, failures=1, note="inverse data out of range")
            rep.add(r)
        return rep
    for u in range(ng):
        if iM[iG[u]] != u:
            car.fail((gl[u],), gl[iM[iG[u]]], gl[u])
    for s in range(nm):
        if iG[iM[s]] != s:
            car.fail((ml[s],), ml[iG[iM[s]]], ml[s])
    for u in range(ng):
        for v in range(ng):
            lhs, rhs = iG[G.mul[u][v]], M.mul[iG[v]][iG[u]]
            if lhs != rhs:
                car.fail((gl[u], gl[v]), ml[lhs], ml[rhs])
    for s in range(nm):
        for t in range(nm):
            lhs, rhs = iM[M.mul[s][t]], G.mul[iM[t]][iM[s]]
            if lhs != rhs:
                car.fail((ml[s], ml[t]), gl[lhs], gl[rhs])
    eG, eM = agm.find_identity(G.mul), agm.find_identity(M.mul)
    if eG is None or eM is None:
        car.fail(("identity",), "G or M has no identity", "identities e_G, e_M")
    elif iG[eG] != eM or iM[eM] != eG:
        car.fail(("identity",), f"{ml[iG[eG]]}, {gl[iM[eM]]}", f"{ml[eM]}, {gl[eG]}")
    rep.add(car.res)

    onj = _ElemRecorder("inverse_on_J", limit)
    onj.res.checked = len(G.J)
    image = [iG[j] for j in G.j_sorted]
    for j in G.j_sorted:
        if not M.j_mask[iG[j]]:
            onj.fail((gl[j],), ml[iG[j]], "an element of J_M")
    if len(set(image)) != len(image) or set(image) != set(M.J):
        onj.fail(("|J_G|", "|J_M|"), f"{len(G.J)} -> {len(set(image))} distinct images",
                 f"bijection onto {len(M.J)} elements")
    rep.add(onj.res)

    com = _ElemRecorder("inverse_commutes_with_i", limit)
    com.res.checked = D.size + ng + nm
    if dx_ok:
        for x in range(D.size):
            if D.inv_i[dxi[x]] != dxi[D.inv_i[x]]:
                com.fail((dl[x],), dl[D.inv_i[dxi[x]]], dl[dxi[D.inv_i[x]]])
    for u in range(ng):
        if M.inv_i[iG[u]] != iG[G.inv_i[u]]:
            com.fail((gl[u],), ml[M.inv_i[iG[u]]], ml[iG[G.inv_i[u]]])
    for s in range(nm):
        if G.inv_i[iM[s]] != iM[M.inv_i[s]]:
            com.fail((ml[s],), gl[G.inv_i[iM[s]]], gl[iM[M.inv_i[s]]])
    rep.add(com.res)

    act = _ElemRecorder("inverse_actions", limit)
    act.res.checked = 2 * ng * nm
    R, L = mp.act_right, mp.act_left
    for s in range(nm):
        for u in range(ng):
            a, b = iG[u], iM[s]
            if R[a][b] != iM[L[s][u]]:
                act.fail((ml[s], gl[u], "▷"), gl[R[a][b]], gl[iM[L[s][u]]])
            if L[a][b] != iG[R[s][u]]:
                act.fail((ml[s], gl[u], "◁"), ml[L[a][b]], ml[iG[R[s][u]]])
    rep.add(act.res)
    return rep


def _in_range(mp, data):
    ng, nm = _sizes(mp)
    return (len(data.inv_G) == ng and all(isinstance(v, int) and 0 <= v < nm for v in data.inv_G)
            and len(data.inv_M) == nm
            and all(isinstance(v, int) and 0 <= v < ng for v in data.inv_M))


def t_table(mp: MatchedPair, data: InverseData):
    """T(s⊗δ_u) = δ_{u^{-1}} ⊗ s^{-1} as an index table H -> H'."""
    ng, nm = _sizes(mp)
    return tuple({data.inv_G[u] * ng + data.inv_M[s]: ONE}
                 for s in range(nm) for u in range(ng))


def T_map(H: BicrossAlgebra, Hd: DualBicrossAlgebra, data: InverseData, x) -> LinComb:
    if data is None:
        raise StructureError("T needs mutual-inverse data")
    x = x if isinstance(x, LinComb) else LinComb.basis(x)
    return Hd.lc(vapply(t_table(H.pair, data), H.to_vec(x)))


def T_J_map(H: BicrossAlgebra, Hd: DualBicrossAlgebra, data: InverseData, x) -> LinComb:
    """T_J(j⊗δ_n) = δ_{n^{-1}} ⊗ j^{-1}, defined on H_J only."""
    if data is None:
        raise StructureError("T_J needs mutual-inverse data")
    x = x if isinstance(x, LinComb) else LinComb.basis(x)
    if not H.in_j_span(x):
        raise StructureError("T_J is only defined on H_J")
    return T_map(H, Hd, data, x)


def _rank(rows, ncols):
    """Exact rank of a list of sparse rational rows."""
    rows = [dict(r) for r in rows if r]
    rank = 0
    for col in range(ncols):
        piv = next((r for r in rows if r.get(col)), None)
        if piv is None:
            continue
        rows.remove(piv)
        rank += 1
        pc = piv[col]
        for r in rows:
            c = r.get(col)
            if c:
                vadd(r, piv, -Fraction(c) / pc)
    return rank


def _check_map_suite(H, Hd, f, f_j, prefix, anti, limit):
    """Compatibility of a linear map f: H -> H' with all structure maps.

    With ``anti`` the product and coproduct are expected reversed.
    ``f_j`` is the map used on H_J (landing in H'_J).
    """
    rep = HopfReport()
    N = H.dim
    r1d, r2d = hc._r1(Hd), hc._r2(Hd)

    rec = _Recorder(H, prefix + ("antimultiplicative" if anti else "multiplicative"), limit)
    rec.res.checked = N * N
    lhs = _prune({k: vapply(f, v) for k, v in H.mul_nonzero.items()})
    prod = product_after(Hd, f, f)
    rhs = {((y, x) if anti else (x, y)): v for (x, y), v in prod.items()}
    rec.compare(lhs, rhs, lambda k: _names(H, k), r1d)
    rep.add(rec.res)

    rec = _Recorder(H, prefix + ("anticomultiplicative" if anti else "comultiplicative"), limit)
    rec.res.checked = N
    for x in range(N):
        lhs: dict = {}
        for (a, b), c in H.comul_table[x].items():
            vadd(lhs, vtensor(f[a], f[b]), c)
        rhs: dict = {}
        for k, c in f[x].items():
            for (p, q), d in Hd.comul_table[k].items():
                vadd(rhs, {((q, p) if anti else (p, q)): d}, c)
        if lhs != rhs:
            rec.fail(_names(H, (x,)), Hd.render(Hd.lc2(lhs)), Hd.render(Hd.lc2(rhs)))
    rep.add(rec.res)

    rec = _Recorder(H, prefix + "antipode", limit)
    rec.res.checked = N
    for x in range(N):
        lhs = vapply(Hd.antipode_table, f[x])
        rhs = vapply(f, H.antipode_table[x])
        if lhs != rhs:
            rec.fail(_names(H, (x,)), r1d(lhs), r1d(rhs))
    rep.add(rec.res)

    jd = set(Hd.j_basis)
    rec = _Recorder(H, prefix + "unit", limit)
    rec.res.checked = len(H.j_basis)
    for a in H.j_basis:
        fa = f_j[a]
        if any(k not in jd for k in fa):
            rec.fail(_names(H, (a,)), r1d(fa), "an element of H'_J")
            continue
        lhs = vapply(f, H.unit_table[a])
        rhs = hc._eta_of(Hd, fa)
        if lhs != rhs:
            rec.fail(_names(H, (a,)), r1d(lhs), r1d(rhs))
    rep.add(rec.res)

    rec = _Recorder(H, prefix + "counit", limit)
    rec.res.checked = N
    jh = set(H.j_basis)
    for x in range(N):
        lhs = vapply(Hd.counit_table, f[x])
        ex = H.counit_table[x]
        if any(k not in jh for k in ex):
            rec.fail(_names(H, (x,)), "counit leaves H_J", "")
            continue
        rhs = vapply(f_j, ex)
        if lhs != rhs:
            rec.fail(_names(H, (x,)), r1d(lhs), r1d(rhs))
    rep.add(rec.res)
    return rep


def verify_T_props(mp: MatchedPair, data: InverseData, H=None, Hd=None, limit=5) -> HopfReport:
    """T reverses product and coproduct and preserves S, star, unit and counit."""
    H = H if H is not None else bicrossproduct(mp)
    Hd = Hd if Hd is not None else dual_bicrossproduct(mp)
    T = t_table(mp, data)
    rep = _check_map_suite(H, Hd, T, T, "T_", True, limit)
    st, std = star_table(mp), star_dual_table(mp)
    rec = _Recorder(H, "T_star", limit)
    rec.res.checked = H.dim
    for x in range(H.dim):
        lhs = vapply(std, T[x])
        rhs = vapply(T, st[x])
        if lhs != rhs:
            rec.fail(_names(H, (x,)), hc._r1(Hd)(lhs), hc._r1(Hd)(rhs))
    rep.add(rec.res)
    return rep


def verify_self_duality(mp: MatchedPair, data: InverseData | None = None, limit=5) -> HopfReport:
    """Check that T∘S : H -> H' is an isomorphism of almost Hopf algebras.

    The report includes the mutual-inverse conditions, the antipode and T
    properties the isomorphism is assembled from, and then the composite
    itself checked directly: bijective, multiplicative, comultiplicative,
    and intertwining units, counits and antipodes.
    """
    if data is None:
        data = derive_inverse_data(mp)
    H = bicrossproduct(mp)
    Hd = dual_bicrossproduct(mp)
    rep = HopfReport()
    mut = check_mutually_inverse(mp, data, limit)
    rep.merge(mut, "mutual.")
    if not _in_range(mp, data):
        return rep
    rep.merge(verify_antipode_props(H, limit), "S.")
    rep.merge(verify_T_props(mp, data, H, Hd, limit), "")

    T = t_table(mp, data)
    phi = tuple(vapply(T, H.antipode_table[x]) for x in range(H.dim))
    rec = _Recorder(H, "TS_bijective", limit)
    rec.res.checked = H.dim
    r = _rank(phi, Hd.dim)
    if r != H.dim or H.dim != Hd.dim:
        rec.fail(("rank",), str(r), str(Hd.dim))
    rjs = _rank([phi[j] for j in H.j_basis], Hd.dim)
    if rjs != len(Hd.j_basis):
        rec.fail(("rank on H_J",), str(rjs), str(len(Hd.j_basis)))
    rep.add(rec.res)
    rep.merge(_check_map_suite(H, Hd, phi, phi, "TS_", False, limit), "")
    return rep
