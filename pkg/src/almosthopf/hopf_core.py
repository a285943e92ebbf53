"""
Almost Hopf algebras given by structure constants on a finite basis.

An almost Hopf algebra is an associative algebra H with a coassociative
coproduct, a counit ``eps: H -> H_J`` and unit ``eta: H_J -> H`` into and out
of a commutative subalgebra ``H_J`` (spanned here by a subset of the basis),
and an antipode S, tied together by the identities checked in
:func:`verify_hopf`.

Every structure map is stored as a dense table over basis indices whose
entries are sparse vectors ``{index: Fraction}`` (coproduct entries are
keyed by index pairs).  The verifier composes these tables sparsely: it
only follows nonzero paths, which makes exhaustive checks on all basis
pairs and triples cheap, and it compares the full sparse tensors of both
sides, so an instance missing on both sides is a genuine zero.
"""

from __future__ import annotations

import dataclasses
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from . import almost_group as ag_mod
from .almost_group import AlmostGroup
from .exact_linear import DeltaElem, GroupElem, LinComb, Pair, frac_str

ONE = Fraction(1)

# check names
ASSOCIATIVITY = "associativity"
COASSOCIATIVITY = "coassociativity"
COUNIT_TWIST = "counit_twist"
COUNIT_IMAGE = "counit_image"
UNIT_DOMAIN = "unit_domain"
UNIT_EXCHANGE = "unit_exchange"
ANTIPODE = "antipode"
COMUL_MULTIPLICATIVE = "comul_multiplicative"
COUNIT_MULTIPLICATIVE = "counit_multiplicative"
UNIT_MULTIPLICATIVE = "unit_multiplicative"
J_CLOSED = "j_closed"
J_COMMUTATIVE = "j_commutative"
ANTIPODE_ANTIMUL = "antipode_antimultiplicative"
ANTIPODE_ANTICOMUL = "antipode_anticomultiplicative"
COUNIT_ANTIPODE = "counit_antipode"
UNIT_ANTIPODE = "unit_antipode"


# ------------------------------------------------------------------ reports

@dataclass
class Witness:
    args: tuple
    lhs: object
    rhs: object
    text: str = ""

    def to_dict(self):
        return {"args": list(self.args), "lhs": _as_text(self.lhs), "rhs": _as_text(self.rhs)}


def _as_text(v):
    return v if isinstance(v, str) else str(v)


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)
    note: str = ""

    @property
    def passed(self):
        return self.failures == 0

    def to_dict(self):
        d = {"name": self.name, "passed": self.passed, "checked": self.checked,
             "failures": self.failures,
             "witnesses": [w.to_dict() for w in self.witnesses]}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class HopfReport:
    """Per-check outcome of an exhaustive verification, in check order."""
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    def __getitem__(self, name) -> CheckResult:
        return self.checks[name]

    def __contains__(self, name):
        return name in self.checks

    def add(self, result: CheckResult):
        self.checks[result.name] = result
        return result

    def merge(self, other: "HopfReport", prefix=""):
        for name, res in other.checks.items():
            res = dataclasses.replace(res, name=prefix + name)
            self.checks[res.name] = res
        return self

    def failed(self):
        return [n for n, c in self.checks.items() if not c.passed]

    def to_dict(self):
        return {"passed": self.passed,
                "checks": [c.to_dict() for c in self.checks.values()]}

    def to_text(self):
        lines = []
        for c in self.checks.values():
            status = "PASS" if c.passed else "FAIL"
            line = f"{status} {c.name} ({c.checked} checked"
            line += f", {c.failures} failing)" if c.failures else ")"
            lines.append(line)
            for w in c.witnesses:
                lines.append(f"    at {', '.join(map(str, w.args))}: {w.lhs}  !=  {w.rhs}")
            if c.note:
                lines.append(f"    note: {c.note}")
        return "\n".join(lines)


# ------------------------------------------------------------ sparse vectors

def vadd(acc: dict, vec: dict, c=ONE):
    """acc += c * vec, dropping zeros."""
    for k, v in vec.items():
        t = acc.get(k, 0) + c * v
        if t:
            acc[k] = t
        else:
            acc.pop(k, None)


def vapply(table, vec: dict) -> dict:
    """Linear map given by ``table[index] -> vec`` applied to ``vec``."""
    out: dict = {}
    for k, c in vec.items():
        vadd(out, table[k], c)
    return out


def vtensor(v: dict, w: dict, c=ONE) -> dict:
    return {(a, b): c * x * y for a, x in v.items() for b, y in w.items()}


# ------------------------------------------------------------ the structure

@dataclass(frozen=True, eq=False)
class AlmostHopfStructure:
    """Structure constants of an almost Hopf algebra.

    ``mul_table[a][b]``, ``counit_table[a]``, ``antipode_table[a]`` and
    ``unit_table[j]`` (for ``j`` in ``j_basis``) are sparse vectors over basis
    indices; ``comul_table[a]`` is keyed by index pairs.
    """
    basis: tuple
    j_basis: tuple
    mul_table: tuple
    comul_table: tuple
    counit_table: tuple
    unit_table: dict
    antipode_table: tuple
    names: tuple = ()
    construction: str = "custom"

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(str(b) for b in self.basis))

    @property
    def dim(self):
        return len(self.basis)

    @property
    def index(self) -> dict:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {lab: k for k, lab in enumerate(self.basis)}
            self.__dict__["_index"] = idx
        return idx

    # -- label level -------------------------------------------------------

    def name(self, label) -> str:
        if isinstance(label, Pair) and label not in self.index:
            return f"{self.name(label.left)} ⊗ {self.name(label.right)}"
        return self.names[self.index[label]]

    def render(self, lc: LinComb) -> str:
        return lc.render(self.name)

    def to_vec(self, lc: LinComb) -> dict:
        try:
            return {self.index[lab]: c for lab, c in lc.items()}
        except KeyError as exc:
            raise KeyError(f"label {exc.args[0]!r} is not in this basis") from None

    def to_vec2(self, lc: LinComb) -> dict:
        return {(self.index[l.left], self.index[l.right]): c for l, c in lc.items()}

    def lc(self, vec: dict) -> LinComb:
        b = self.basis
        return LinComb._trusted({b[k]: Fraction(c) for k, c in vec.items() if c})

    def lc2(self, vec: dict) -> LinComb:
        b = self.basis
        return LinComb._trusted({Pair(b[k], b[l]): Fraction(c) for (k, l), c in vec.items() if c})

    def lc3(self, vec: dict) -> LinComb:
        b = self.basis
        return LinComb._trusted({Pair(b[p], Pair(b[q], b[r])): Fraction(c)
                                 for (p, q, r), c in vec.items() if c})

    def mul(self, a: LinComb, b: LinComb) -> LinComb:
        va, vb = self.to_vec(a), self.to_vec(b)
        out: dict = {}
        for x, cx in va.items():
            row = self.mul_table[x]
            for y, cy in vb.items():
                vadd(out, row[y], cx * cy)
        return self.lc(out)

    def comul(self, a: LinComb) -> LinComb:
        return self.lc2(vapply(self.comul_table, self.to_vec(a)))

    def counit(self, a: LinComb) -> LinComb:
        return self.lc(vapply(self.counit_table, self.to_vec(a)))

    def antipode(self, a: LinComb) -> LinComb:
        return self.lc(vapply(self.antipode_table, self.to_vec(a)))

    def unit(self, a: LinComb) -> LinComb:
        va = self.to_vec(a)
        out: dict = {}
        for j, c in va.items():
            if j not in self.unit_table:
                raise KeyError(f"unit is only defined on H_J; {self.basis[j]!r} is outside")
            vadd(out, self.unit_table[j], c)
        return self.lc(out)

    def in_j_span(self, a: LinComb) -> bool:
        js = set(self.j_basis)
        return all(self.index[lab] in js for lab in a.labels())

    # -- derived tables -----------------------------------------------------

    def _cache(self, key, build):
        val = self.__dict__.get(key)
        if val is None:
            val = build()
            self.__dict__[key] = val
        return val

    @property
    def mul_nonzero(self):
        def build():
            return {(a, b): v for a, row in enumerate(self.mul_table)
                    for b, v in enumerate(row) if v}
        return self._cache("_mul_nz", build)

    @property
    def left_rows(self):
        """left_rows[a] = [(b, a·b)] over the nonzero products."""
        def build():
            rows = [[] for _ in self.basis]
            for (a, b), v in self.mul_nonzero.items():
                rows[a].append((b, v))
            return rows
        return self._cache("_left_rows", build)

    @property
    def right_cols(self):
        """right_cols[b] = [(a, a·b)] over the nonzero products."""
        def build():
            cols = [[] for _ in self.basis]
            for (a, b), v in self.mul_nonzero.items():
                cols[b].append((a, v))
            return cols
        return self._cache("_right_cols", build)


def from_maps(basis, j_basis, mul_map, comul_map, counit_map, unit_map,
              antipode_map, names=None, construction="custom") -> AlmostHopfStructure:
    """Tabulate label-level structure maps (callables or mappings)."""
    basis = tuple(basis)
    index = {lab: k for k, lab in enumerate(basis)}
    get = lambda f: f.__getitem__ if hasattr(f, "__getitem__") and not callable(f) else f
    mul_f, comul_f, counit_f, unit_f, anti_f = map(
        get, (mul_map, comul_map, counit_map, unit_map, antipode_map))

    def vec(lc):
        return {index[lab]: c for lab, c in lc.items()}

    mul_table = tuple(tuple(vec(mul_f(a, b)) for b in basis) for a in basis)
    comul_table = tuple({(index[l.left], index[l.right]): c for l, c in comul_f(a).items()}
                        for a in basis)
    counit_table = tuple(vec(counit_f(a)) for a in basis)
    antipode_table = tuple(vec(anti_f(a)) for a in basis)
    jb = tuple(sorted(index[j] for j in j_basis))
    unit_table = {j: vec(unit_f(basis[j])) for j in jb}
    return AlmostHopfStructure(basis, jb, mul_table, comul_table, counit_table,
                               unit_table, antipode_table,
                               tuple(names) if names else (), construction)


def mutate(H: AlmostHopfStructure, which: str, key, value: LinComb) -> AlmostHopfStructure:
    """Copy of H with one structure-map entry replaced (negative controls).

    ``which`` is one of ``mul``, ``comul``, ``counit``, ``unit``, ``antipode``;
    ``key`` is a basis label (a pair of labels for ``mul``).
    """
    idx = H.index
    if which == "mul":
        a, b = idx[key[0]], idx[key[1]]
        rows = [list(r) for r in H.mul_table]
        rows[a][b] = H.to_vec(value)
        return dataclasses.replace(H, mul_table=tuple(tuple(r) for r in rows))
    k = idx[key]
    if which == "comul":
        t = list(H.comul_table)
        t[k] = H.to_vec2(value)
        return dataclasses.replace(H, comul_table=tuple(t))
    if which == "unit":
        t = dict(H.unit_table)
        t[k] = H.to_vec(value)
        return dataclasses.replace(H, unit_table=t)
    if which in ("counit", "antipode"):
        name = f"{which}_table"
        t = list(getattr(H, name))
        t[k] = H.to_vec(value)
        return dataclasses.replace(H, **{name: tuple(t)})
    raise ValueError(f"unknown structure map {which!r}")


# ------------------------------------------------------------ constructions

def function_algebra(G: AlmostGroup) -> AlmostHopfStructure:
    """k(G): delta functions, pointwise product, coproduct summing over factorisations."""
    ag_mod.require_valid(G)
    n = G.size
    basis = tuple(DeltaElem(x) for x in range(n))
    mul_table = tuple(tuple({x: ONE} if x == y else {} for y in range(n)) for x in range(n))
    comul = [dict() for _ in range(n)]
    for y in range(n):
        for z in range(n):
            comul[G.mul[y][z]][(y, z)] = ONE
    counit = tuple({x: ONE} if G.j_mask[x] else {} for x in range(n))
    unit = {j: {} for j in G.j_sorted}
    for z in range(n):
        norm = G.mul[z][G.inv_i[z]]
        if norm in unit:
            unit[norm][z] = ONE
    antipode = tuple({G.inv_i[x]: ONE} for x in range(n))
    names = tuple(f"δ_{e}" for e in G.elements)
    return AlmostHopfStructure(basis, G.j_sorted, mul_table, tuple(comul), counit,
                               unit, antipode, names, "function")


def group_algebra(G: AlmostGroup) -> AlmostHopfStructure:
    """kG: linear extension of the almost-group product, grouplike coproduct."""
    ag_mod.require_valid(G)
    n = G.size
    basis = tuple(GroupElem(x) for x in range(n))
    mul_table = tuple(tuple({G.mul[x][y]: ONE} for y in range(n)) for x in range(n))
    comul = tuple({(x, x): ONE} for x in range(n))
    counit = tuple({G.mul[x][G.inv_i[x]]: ONE} for x in range(n))
    unit = {j: {j: ONE} for j in G.j_sorted}
    antipode = tuple({G.inv_i[x]: ONE} for x in range(n))
    return AlmostHopfStructure(basis, G.j_sorted, mul_table, comul, counit, unit,
                               antipode, tuple(G.elements), "group")


# ------------------------------------------------------------ verification

class _Recorder:
    def __init__(self, H, name, limit):
        self.H = H
        self.res = CheckResult(name)
        self.limit = limit

    def fail(self, args, lhs, rhs):
        self.res.failures += 1
        if self.limit is None or len(self.res.witnesses) < self.limit:
            self.res.witnesses.append(Witness(tuple(args), lhs, rhs))

    def compare(self, lhs: dict, rhs: dict, args_of, render):
        """Compare two sparse tensors keyed by argument tuples."""
        empty = {}
        for key in sorted(set(lhs) | set(rhs)):
            l, r = lhs.get(key, empty), rhs.get(key, empty)
            if l != r:
                self.fail(args_of(key), render(l), render(r))


def _names(H, idxs):
    return tuple(H.names[k] for k in idxs)


def _r1(H):
    return lambda v: H.render(H.lc(v))


def _r2(H):
    return lambda v: H.render(H.lc2(v))


def _r3(H):
    return lambda v: H.render(H.lc3(v))


def _inverse_index(table):
    """inv[k] = [(x, c)] for every x whose image has coefficient c at k."""
    inv = defaultdict(list)
    for x, vec in enumerate(table):
        for k, c in vec.items():
            inv[k].append((x, c))
    return inv


def product_after(H, f_table, g_table, keys=None):
    """Sparse tensor ``{(x, y): f(x)·g(y)}`` over all basis pairs."""
    g_inv = _inverse_index(g_table)
    left_rows = H.left_rows
    out = defaultdict(dict)
    xs = range(len(f_table)) if keys is None else keys
    for x in xs:
        for a, ca in f_table[x].items():
            for c, w in left_rows[a]:
                for y, cy in g_inv.get(c, ()):
                    vadd(out[(x, y)], w, ca * cy)
    return {k: v for k, v in out.items() if v}


def check_associativity(H, limit=5):
    rec = _Recorder(H, ASSOCIATIVITY, limit)
    n = H.dim
    rec.res.checked = n ** 3
    lhs = defaultdict(dict)
    rhs = defaultdict(dict)
    for (x, y), v in H.mul_nonzero.items():
        for k, c in v.items():
            for z, w in H.left_rows[k]:
                vadd(lhs[(x, y, z)], w, c)
    for (y, z), v in H.mul_nonzero.items():
        for k, c in v.items():
            for x, w in H.right_cols[k]:
                vadd(rhs[(x, y, z)], w, c)
    rec.compare(_prune(lhs), _prune(rhs), lambda k: _names(H, k), _r1(H))
    return rec.res


def _prune(d):
    return {k: v for k, v in d.items() if v}


def check_coassociativity(H, limit=5):
    rec = _Recorder(H, COASSOCIATIVITY, limit)
    rec.res.checked = H.dim
    D = H.comul_table
    for x in range(H.dim):
        lhs: dict = {}
        rhs: dict = {}
        for (a, b), c in D[x].items():
            for (p, q), d in D[a].items():
                vadd(lhs, {(p, q, b): d}, c)
            for (p, q), d in D[b].items():
                vadd(rhs, {(a, p, q): d}, c)
        if lhs != rhs:
            rec.fail(_names(H, (x,)), H.render(H.lc3(lhs)), H.render(H.lc3(rhs)))
    return rec.res


def check_counit_image(H, limit=5):
    rec = _Recorder(H, COUNIT_IMAGE, limit)
    rec.res.checked = H.dim
    js = set(H.j_basis)
    for x in range(H.dim):
        e = H.counit_table[x]
        outside = {k: c for k, c in e.items() if k not in js}
        if outside:
            rec.fail(_names(H, (x,)), H.render(H.lc(e)), "an element of H_J")
    return rec.res


def check_unit_domain(H, limit=5):
    rec = _Recorder(H, UNIT_DOMAIN, limit)
    rec.res.checked = len(H.j_basis)
    if set(H.unit_table) != set(H.j_basis):
        rec.fail(("unit",), f"defined on {sorted(H.unit_table)}",
                 f"H_J basis {list(H.j_basis)}")
    return rec.res


def check_counit_twist(H, limit=5):
    """(eps ⊗ id)Δ(h) = τ(id ⊗ eps)Δ(h) on every basis element."""
    rec = _Recorder(H, COUNIT_TWIST, limit)
    rec.res.checked = H.dim
    E = H.counit_table
    for x in range(H.dim):
        lhs: dict = {}
        rhs: dict = {}
        for (a, b), c in H.comul_table[x].items():
            vadd(lhs, {(k, b): e for k, e in E[a].items()}, c)
            vadd(rhs, {(k, a): e for k, e in E[b].items()}, c)
        if lhs != rhs:
            rec.fail(_names(H, (x,)), H.render(H.lc2(lhs)), H.render(H.lc2(rhs)))
    return rec.res


def check_unit_exchange(H, limit=5):
    """eta(j)·x = x·eta(j) for j in the H_J basis and every basis x."""
    rec = _Recorder(H, UNIT_EXCHANGE, limit)
    js = [j for j in H.j_basis if j in H.unit_table]
    rec.res.checked = len(js) * H.dim
    for j in js:
        eta = H.unit_table[j]
        for x in range(H.dim):
            lhs: dict = {}
            rhs: dict = {}
            for k, c in eta.items():
                vadd(lhs, H.mul_table[k][x], c)
                vadd(rhs, H.mul_table[x][k], c)
            if lhs != rhs:
                rec.fail(_names(H, (j, x)), H.render(H.lc(lhs)), H.render(H.lc(rhs)))
    return rec.res


def _eta_of(H, vec):
    out: dict = {}
    for k, c in vec.items():
        img = H.unit_table.get(k)
        if img is None:
            return None
        vadd(out, img, c)
    return out


def check_antipode(H, limit=5):
    """·(S ⊗ id)Δ = ·(id ⊗ S)Δ = eta∘eps on every basis element."""
    rec = _Recorder(H, ANTIPODE, limit)
    rec.res.checked = H.dim
    S, M = H.antipode_table, H.mul_table
    for x in range(H.dim):
        left: dict = {}
        right: dict = {}
        for (a, b), c in H.comul_table[x].items():
            for k, d in S[a].items():
                vadd(left, M[k][b], c * d)
            for k, d in S[b].items():
                vadd(right, M[a][k], c * d)
        target = _eta_of(H, H.counit_table[x])
        if target is None:
            rec.fail(_names(H, (x,)), "eta(eps(x)) undefined", "counit leaves H_J")
            continue
        if left != target:
            rec.fail(_names(H, (x,)) + ("S⊗id",), H.render(H.lc(left)), H.render(H.lc(target)))
        if right != target:
            rec.fail(_names(H, (x,)) + ("id⊗S",), H.render(H.lc(right)), H.render(H.lc(target)))
    return rec.res


def check_comul_multiplicative(H, limit=5):
    """Δ(x·y) = Δ(x)Δ(y) on all basis pairs."""
    rec = _Recorder(H, COMUL_MULTIPLICATIVE, limit)
    n = H.dim
    rec.res.checked = n * n
    D, M = H.comul_table, H.mul_table
    lhs = {}
    for (x, y), v in H.mul_nonzero.items():
        acc: dict = {}
        for k, c in v.items():
            vadd(acc, D[k], c)
        if acc:
            lhs[(x, y)] = acc
    # Δ(y) terms indexed by their left tensor factor
    by_left = defaultdict(list)
    for y in range(n):
        for (c, d), cy in D[y].items():
            by_left[c].append((y, d, cy))
    rhs = defaultdict(dict)
    for x in range(n):
        for (a, b), cx in D[x].items():
            for c, w1 in H.left_rows[a]:
                for y, d, cy in by_left.get(c, ()):
                    w2 = M[b][d]
                    if w2:
                        vadd(rhs[(x, y)], vtensor(w1, w2), cx * cy)
    rec.compare(lhs, _prune(rhs), lambda k: _names(H, k), _r2(H))
    return rec.res


def check_counit_multiplicative(H, limit=5):
    rec = _Recorder(H, COUNIT_MULTIPLICATIVE, limit)
    rec.res.checked = H.dim ** 2
    E = H.counit_table
    lhs = _prune({k: vapply(E, v) for k, v in H.mul_nonzero.items()})
    rhs = product_after(H, E, E)
    rec.compare(lhs, rhs, lambda k: _names(H, k), _r1(H))
    return rec.res


def check_j_subalgebra(H, limit=5):
    """H_J closed under the product, commutative, and eta multiplicative on it."""
    closed = _Recorder(H, J_CLOSED, limit)
    comm = _Recorder(H, J_COMMUTATIVE, limit)
    umul = _Recorder(H, UNIT_MULTIPLICATIVE, limit)
    js = H.j_basis
    jset = set(js)
    M = H.mul_table
    for rec in (closed, comm, umul):
        rec.res.checked = len(js) ** 2
    for a in js:
        for b in js:
            ab = M[a][b]
            if any(k not in jset for k in ab):
                closed.fail(_names(H, (a, b)), H.render(H.lc(ab)), "an element of H_J")
            if ab != M[b][a]:
                comm.fail(_names(H, (a, b)), H.render(H.lc(ab)), H.render(H.lc(M[b][a])))
            lhs = _eta_of(H, ab)
            ea, eb = H.unit_table.get(a), H.unit_table.get(b)
            if lhs is None or ea is None or eb is None:
                umul.fail(_names(H, (a, b)), "eta undefined", "")
                continue
            rhs: dict = {}
            for p, cp in ea.items():
                for q, cq in eb.items():
                    vadd(rhs, M[p][q], cp * cq)
            if lhs != rhs:
                umul.fail(_names(H, (a, b)), H.render(H.lc(lhs)), H.render(H.lc(rhs)))
    return closed.res, comm.res, umul.res


def check_antipode_antimul(H, limit=5) -> CheckResult:
    """S(x·y) = S(y)·S(x) on all basis pairs."""
    rec = _Recorder(H, ANTIPODE_ANTIMUL, limit)
    rec.res.checked = H.dim ** 2
    S = H.antipode_table
    lhs = _prune({k: vapply(S, v) for k, v in H.mul_nonzero.items()})
    rhs = {(x, y): v for (y, x), v in product_after(H, S, S).items()}
    rec.compare(lhs, rhs, lambda k: _names(H, k), _r1(H))
    return rec.res


def check_antipode_anticomul(H, limit=5) -> CheckResult:
    """τΔS = (S ⊗ S)Δ on every basis element."""
    rec = _Recorder(H, ANTIPODE_ANTICOMUL, limit)
    rec.res.checked = H.dim
    S, D = H.antipode_table, H.comul_table
    for x in range(H.dim):
        lhs: dict = {}
        for k, c in S[x].items():
            vadd(lhs, {(q, p): d for (p, q), d in D[k].items()}, c)
        rhs: dict = {}
        for (a, b), c in D[x].items():
            vadd(rhs, vtensor(S[a], S[b]), c)
        if lhs != rhs:
            rec.fail(_names(H, (x,)), H.render(H.lc2(lhs)), H.render(H.lc2(rhs)))
    return rec.res


def check_antipode_unit_counit(H, limit=5):
    """eps∘S = S_J∘eps on H, and S∘eta = eta∘S_J on H_J (S_J = S restricted to H_J)."""
    ce = _Recorder(H, COUNIT_ANTIPODE, limit)
    ue = _Recorder(H, UNIT_ANTIPODE, limit)
    S, E = H.antipode_table, H.counit_table
    jset = set(H.j_basis)
    ce.res.checked = H.dim
    for x in range(H.dim):
        lhs = vapply(E, S[x])
        rhs = vapply(S, E[x])
        if lhs != rhs or any(k not in jset for k in rhs):
            ce.fail(_names(H, (x,)), H.render(H.lc(lhs)), H.render(H.lc(rhs)))
    ue.res.checked = len(H.j_basis)
    for j in H.j_basis:
        if any(k not in jset for k in S[j]):
            ue.fail(_names(H, (j,)), H.render(H.lc(S[j])), "S does not preserve H_J")
            continue
        lhs = vapply(S, H.unit_table[j])
        rhs = _eta_of(H, S[j])
        if lhs != rhs:
            ue.fail(_names(H, (j,)), H.render(H.lc(lhs)), H.render(H.lc(rhs or {})))
    return ce.res, ue.res


def verify_hopf(H: AlmostHopfStructure, limit=5, antialgebra=True) -> HopfReport:
    """Exhaustively check every almost-Hopf-algebra identity on basis tuples.

    With ``antialgebra`` the anti-multiplicativity of the antipode is
    included as well.
    """
    rep = HopfReport()
    rep.add(check_associativity(H, limit))
    rep.add(check_coassociativity(H, limit))
    closed, comm, umul = check_j_subalgebra(H, limit)
    rep.add(closed)
    rep.add(comm)
    rep.add(check_counit_image(H, limit))
    rep.add(check_unit_domain(H, limit))
    rep.add(check_counit_twist(H, limit))
    rep.add(check_unit_exchange(H, limit))
    rep.add(check_antipode(H, limit))
    rep.add(check_comul_multiplicative(H, limit))
    rep.add(check_counit_multiplicative(H, limit))
    rep.add(umul)
    if antialgebra:
        rep.add(check_antipode_antimul(H, limit))
    return rep


# ------------------------------------------------------------ export

def _terms(vec):
    return [{"k": k, "c": frac_str(vec[k])} for k in sorted(vec)]


def export_structure(H: AlmostHopfStructure, construction=None) -> dict:
    """Structure constants as a JSON-ready dict with deterministic ordering."""
    n = H.dim
    out = {
        "construction": construction or H.construction,
        "basis": list(H.names),
        "jBasis": list(H.j_basis),
        "mul": [{"i": a, "j": b, "terms": _terms(H.mul_table[a][b])}
                for a in range(n) for b in range(n) if H.mul_table[a][b]],
        "comul": [{"i": a, "terms": [{"k": k, "l": l, "c": frac_str(c)}
                                     for (k, l), c in sorted(H.comul_table[a].items())]}
                  for a in range(n)],
        "counit": [{"i": a, "terms": _terms(H.counit_table[a])} for a in range(n)],
        "unit": [{"i": j, "terms": _terms(H.unit_table[j])} for j in sorted(H.unit_table)],
        "antipode": [{"i": a, "terms": _terms(H.antipode_table[a])} for a in range(n)],
    }
    return out


def export_json(H: AlmostHopfStructure, construction=None) -> str:
    return json.dumps(export_structure(H, construction), indent=2, ensure_ascii=False)
