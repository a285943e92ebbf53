"""
Matched pairs of almost groups and their doublecross products.

A matched pair is two almost groups G, M with actions
``s ▷ u`` (M x G -> G) and ``s ◁ u`` (M x G -> M) that let a product ``s u``
be rewritten as ``(s ▷ u)(s ◁ u)``.  Both actions are dense ``|M| x |G|``
index tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from . import almost_group as agm
from .almost_group import AlmostGroup, AxiomReport, _Collector
from .errors import AxiomError, ParseError, StructureError

# rule identifiers
LEFT_MUL_G = "left_over_product_G"      # s◁(uv) = (s◁u)◁v
LEFT_MUL_M = "left_over_product_M"      # (st)◁u = (s◁(t▷u))(t◁u)
RIGHT_MUL_M = "right_over_product_M"    # (st)▷u = s▷(t▷u)
RIGHT_MUL_G = "right_over_product_G"    # s▷(uv) = (s▷u)((s◁u)▷v)
I_RIGHT = "i_rule_right"                # (s◁u)^i ▷ (s▷u)^i = u^i
I_LEFT = "i_rule_left"                  # (s◁u)^i ◁ (s▷u)^i = s^i
VACUUM_JM_RIGHT = "vacuum_JM_right"     # j▷u = u,  j in J_M
VACUUM_JM_LEFT = "vacuum_JM_left"       # j◁u = j,  j in J_M
VACUUM_JG_RIGHT = "vacuum_JG_right"     # s▷j = j,  j in J_G
VACUUM_JG_LEFT = "vacuum_JG_left"       # s◁j = s,  j in J_G
NORM_LEFT = "norm_left_action"          # (s◁w)^i(s◁w) = s s^i = s^i s
NORM_RIGHT = "norm_right_action"        # (s▷w)(s▷w)^i = w w^i = w^i w


@dataclass(frozen=True)
class MatchedPair:
    G: AlmostGroup
    M: AlmostGroup
    act_right: tuple    # act_right[s][u] = s ▷ u, an index into G
    act_left: tuple     # act_left[s][u] = s ◁ u, an index into M

    def __post_init__(self):
        nm, ng = self.M.size, self.G.size
        for name, table, bound in (("right action", self.act_right, ng),
                                   ("left action", self.act_left, nm)):
            if len(table) != nm or any(len(row) != ng for row in table):
                raise StructureError(f"{name} table must be {nm}x{ng} (|M| x |G|)")
            for row in table:
                for v in row:
                    agm._check_index(v, bound, name)

    @cached_property
    def report(self) -> AxiomReport:
        return verify_matched(self)

    def right(self, s, u):
        return self.act_right[s][u]

    def left(self, s, u):
        return self.act_left[s][u]


def make_pair(G, M, act_right, act_left) -> MatchedPair:
    to_t = lambda t: tuple(tuple(int(v) for v in row) for row in t)
    return MatchedPair(G, M, to_t(act_right), to_t(act_left))


def trivial_pair(G: AlmostGroup, M: AlmostGroup) -> MatchedPair:
    """Both actions trivial: s ▷ u = u and s ◁ u = s."""
    agm.require_valid(G, "G")
    agm.require_valid(M, "M")
    right = tuple(tuple(range(G.size)) for _ in range(M.size))
    left = tuple(tuple(s for _ in range(G.size)) for s in range(M.size))
    return MatchedPair(G, M, right, left)


def verify_matched(mp: MatchedPair, limit: int | None = 10) -> AxiomReport:
    """Exhaustively check every matched-pair rule, plus the two norm identities.

    Failures of G or M themselves are reported with a ``G.``/``M.`` prefix.
    Witnesses are index tuples ``(s, t, u, v)`` restricted to the variables
    the rule uses, M-indices first.
    """
    G, M = mp.G, mp.M
    out = _Collector(limit)
    for tag, X in (("G.", G), ("M.", M)):
        for v in X.axiom_report.violations:
            out.add(tag + v.axiom, *v.witness)
    R, L = mp.act_right, mp.act_left
    gm, mm, gi, mi = G.mul, M.mul, G.inv_i, M.inv_i
    ng, nm = G.size, M.size

    for s in range(nm):
        Rs, Ls = R[s], L[s]
        for u in range(ng):
            su_l = Ls[u]
            for v in range(ng):
                if Ls[gm[u][v]] != L[su_l][v]:
                    out.add(LEFT_MUL_G, s, u, v)
                if Rs[gm[u][v]] != gm[Rs[u]][R[su_l][v]]:
                    out.add(RIGHT_MUL_G, s, u, v)

    for s in range(nm):
        for t in range(nm):
            st = mm[s][t]
            Rt, Lt = R[t], L[t]
            for u in range(ng):
                if L[st][u] != mm[L[s][Rt[u]]][Lt[u]]:
                    out.add(LEFT_MUL_M, s, t, u)
                if R[st][u] != R[s][Rt[u]]:
                    out.add(RIGHT_MUL_M, s, t, u)

    for s in range(nm):
        for u in range(ng):
            a, b = mi[L[s][u]], gi[R[s][u]]
            if R[a][b] != gi[u]:
                out.add(I_RIGHT, s, u)
            if L[a][b] != mi[s]:
                out.add(I_LEFT, s, u)

    for j in M.j_sorted:
        for u in range(ng):
            if R[j][u] != u:
                out.add(VACUUM_JM_RIGHT, j, u)
            if L[j][u] != j:
                out.add(VACUUM_JM_LEFT, j, u)
    for s in range(nm):
        for j in G.j_sorted:
            if R[s][j] != j:
                out.add(VACUUM_JG_RIGHT, s, j)
            if L[s][j] != s:
                out.add(VACUUM_JG_LEFT, s, j)

    for s in range(nm):
        ssi, sis = mm[s][mi[s]], mm[mi[s]][s]
        for w in range(ng):
            sw = L[s][w]
            if not (mm[mi[sw]][sw] == ssi == sis):
                out.add(NORM_LEFT, s, w)
            rw = R[s][w]
            if not (gm[rw][gi[rw]] == gm[w][gi[w]] == gm[gi[w]][w]):
                out.add(NORM_RIGHT, s, w)

    return out.report()


def require_matched(mp: MatchedPair):
    rep = mp.report
    if not rep.passed:
        raise AxiomError("not a matched pair: " + ", ".join(rep.failed_axioms()), rep)
    return mp


def dx_index(mp: MatchedPair, u: int, s: int) -> int:
    """Index of (u, s) in the doublecross carrier G x M."""
    return u * mp.M.size + s


def doublecross(mp: MatchedPair) -> AlmostGroup:
    """The almost group G ⋈ M on G x M.

    ``(u,s)(v,t) = (u(s▷v), (s◁v)t)``, ``(u,s)^i = (s^i▷u^i, s^i◁u^i)``,
    ``J = J_G x J_M``.
    """
    require_matched(mp)
    G, M = mp.G, mp.M
    ng, nm = G.size, M.size
    R, L = mp.act_right, mp.act_left
    idx = lambda u, s: u * nm + s
    labels = [f"({G.elements[u]},{M.elements[s]})" for u in range(ng) for s in range(nm)]
    table = [[idx(G.mul[u][R[s][v]], M.mul[L[s][v]][t]) for v in range(ng) for t in range(nm)]
             for u in range(ng) for s in range(nm)]
    inv = []
    for u in range(ng):
        for s in range(nm):
            si, ui = M.inv_i[s], G.inv_i[u]
            inv.append(idx(R[si][ui], L[si][ui]))
    J = [idx(u, s) for u in G.j_sorted for s in M.j_sorted]
    return agm.build(labels, table, inv, J)


# ---------------------------------------------------------------- .mpair

def parse_mpair(text: str, base_dir=".") -> MatchedPair:
    """Parse a ``.mpair`` file.

    Format: ``G <path.agrp>`` and ``M <path.agrp>`` (relative to ``base_dir``),
    then ``right <s> <u> : <g>`` and ``left <s> <u> : <m>`` for every (s, u).
    """
    base = Path(base_dir)
    G = M = None
    right: dict = {}
    left: dict = {}
    for k, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head in ("G", "M"):
            if len(toks) != 2:
                raise ParseError(f"expected '{head} <path>'", k)
            if (G, M)[head == "M"] is not None:
                raise ParseError(f"{head} given twice", k)
            try:
                grp = agm.load_agrp(base / toks[1])
            except OSError as exc:
                raise ParseError(f"cannot read {toks[1]}: {exc.strerror}", k) from None
            if head == "G":
                G = grp
            else:
                M = grp
            continue
        if head not in ("right", "left"):
            raise ParseError(f"unknown directive {head!r}", k)
        if G is None or M is None:
            raise ParseError("G and M must be declared before action entries", k)
        if len(toks) != 5 or toks[3] != ":":
            raise ParseError(f"expected '{head} <s> <u> : <value>'", k)
        try:
            s, u = M.index[toks[1]], G.index[toks[2]]
            val = (G if head == "right" else M).index[toks[4]]
        except KeyError as exc:
            raise ParseError(f"unknown element label {exc.args[0]!r}", k) from None
        table = right if head == "right" else left
        if (s, u) in table:
            raise ParseError(f"duplicate {head} entry for ({toks[1]}, {toks[2]})", k)
        table[(s, u)] = val
    if G is None or M is None:
        raise ParseError("matched-pair file must name both G and M")
    for name, table in (("right", right), ("left", left)):
        for s in range(M.size):
            for u in range(G.size):
                if (s, u) not in table:
                    raise ParseError(f"missing {name} entry for "
                                     f"({M.elements[s]}, {G.elements[u]})")
    R = [[right[(s, u)] for u in range(G.size)] for s in range(M.size)]
    L = [[left[(s, u)] for u in range(G.size)] for s in range(M.size)]
    return make_pair(G, M, R, L)


def load_mpair(path) -> MatchedPair:
    path = Path(path)
    return parse_mpair(path.read_text(encoding="utf-8"), path.parent)


def dump_mpair(mp: MatchedPair, g_path: str, m_path: str) -> str:
    G, M = mp.G, mp.M
    out = [f"G {g_path}", f"M {m_path}"]
    for s in range(M.size):
        for u in range(G.size):
            out.append(f"right {M.elements[s]} {G.elements[u]} : {G.elements[mp.act_right[s][u]]}")
    for s in range(M.size):
        for u in range(G.size):
            out.append(f"left {M.elements[s]} {G.elements[u]} : {M.elements[mp.act_left[s][u]]}")
    return "\n".join(out) + "\n"
