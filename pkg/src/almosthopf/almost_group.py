"""
Finite almost groups given by explicit tables.

An almost group is a set with an associative product, an involution
``g -> g^i`` that reverses products, and a subset ``J`` of central elements,
closed under the product and under ``i``, that contains every ``g g^i``
(with ``g g^i = g^i g``).  When ``J`` is the identity alone this is a group.

Elements are addressed by dense integer index; labels are only used for
input and output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

from .errors import AxiomError, ParseError, StructureError

# axiom identifiers used in reports
ASSOCIATIVITY = "associativity"
ANTIHOMOMORPHISM = "antihomomorphism"     # (gh)^i = h^i g^i
J_CENTRAL = "j_central"                   # jg = gj
NORM_SYMMETRIC = "norm_symmetric"         # g g^i = g^i g
NORM_IN_J = "norm_in_j"                   # g g^i in J
INVOLUTION = "involution"                 # (g^i)^i = g
J_CLOSED_MUL = "j_closed_mul"
J_CLOSED_I = "j_closed_i"

AXIOMS = (ASSOCIATIVITY, ANTIHOMOMORPHISM, J_CENTRAL, NORM_SYMMETRIC,
          NORM_IN_J, INVOLUTION, J_CLOSED_MUL, J_CLOSED_I)


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def to_dict(self, names=None):
        w = [names[k] for k in self.witness] if names is not None else list(self.witness)
        return {"axiom": self.axiom, "witness": w}


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of an exhaustive check; ``passed`` iff there are no violations.

    At most ``limit`` witnesses are kept per axiom; ``counts`` holds the
    full number of failing instances.
    """
    violations: tuple = ()
    counts: dict = field(default_factory=dict)
    names: tuple | None = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def failed_axioms(self):
        seen = []
        for v in self.violations:
            if v.axiom not in seen:
                seen.append(v.axiom)
        return seen

    def to_dict(self):
        return {
            "passed": self.passed,
            "failureCounts": {k: self.counts[k] for k in sorted(self.counts)},
            "violations": [v.to_dict(self.names) for v in self.violations],
        }

    def to_text(self):
        if self.passed:
            return "all axioms hold"
        lines = []
        for v in self.violations:
            w = [self.names[k] for k in v.witness] if self.names else list(v.witness)
            lines.append(f"FAIL {v.axiom}: witness {tuple(w)}")
        return "\n".join(lines)


class _Collector:
    def __init__(self, limit):
        self.limit = limit
        self.violations = []
        self.counts = {}

    def add(self, axiom, *witness):
        n = self.counts.get(axiom, 0)
        self.counts[axiom] = n + 1
        if self.limit is None or n < self.limit:
            self.violations.append(Violation(axiom, tuple(witness)))

    def report(self, names=None):
        return AxiomReport(tuple(self.violations), dict(self.counts), names)


@dataclass(frozen=True, eq=True)
class AlmostGroup:
    elements: tuple
    mul: tuple            # mul[x][y] = index of x·y
    inv_i: tuple          # inv_i[x] = index of x^i
    J: frozenset

    @property
    def size(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    @cached_property
    def j_mask(self):
        mask = [False] * len(self.elements)
        for j in self.J:
            mask[j] = True
        return tuple(mask)

    @cached_property
    def j_sorted(self):
        return tuple(sorted(self.J))

    @cached_property
    def index(self):
        return {lbl: k for k, lbl in enumerate(self.elements)}

    @cached_property
    def axiom_report(self) -> AxiomReport:
        return verify_axioms(self)

    def label(self, x):
        return self.elements[x]

    def lookup(self, label):
        try:
            return self.index[label]
        except KeyError:
            raise StructureError(f"unknown element label {label!r}") from None

    def __repr__(self):
        return f"AlmostGroup(|G|={self.size}, |J|={len(self.J)})"


def _check_index(x, n, what):
    if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
        raise StructureError(f"{what}: index {x!r} out of range 0..{n - 1}")


def build(elements: Sequence[str], mul, inv_i, J) -> AlmostGroup:
    """Assemble an AlmostGroup from raw tables without checking the axioms."""
    elements = tuple(str(e) for e in elements)
    n = len(elements)
    if n < 1:
        raise StructureError("an almost group needs at least one element")
    if len(set(elements)) != n:
        dup = sorted({e for e in elements if elements.count(e) > 1})
        raise StructureError(f"duplicate element labels: {dup}")
    mul = tuple(tuple(int(v) for v in row) for row in mul)
    if len(mul) != n or any(len(row) != n for row in mul):
        raise StructureError(f"multiplication table must be {n}x{n}")
    for x, row in enumerate(mul):
        for v in row:
            _check_index(v, n, f"mul row {x}")
    inv_i = tuple(int(v) for v in inv_i)
    if len(inv_i) != n:
        raise StructureError(f"i map must have {n} entries, got {len(inv_i)}")
    for v in inv_i:
        _check_index(v, n, "i map")
    J = frozenset(int(j) for j in J)
    for j in J:
        _check_index(j, n, "J")
    return AlmostGroup(elements, mul, inv_i, J)


def verify_axioms(ag: AlmostGroup, limit: int | None = 10) -> AxiomReport:
    """Exhaustively check every almost-group axiom, collecting witnesses."""
    n = ag.size
    mul, ii, jm = ag.mul, ag.inv_i, ag.j_mask
    out = _Collector(limit)

    for x in range(n):
        mx = mul[x]
        for y in range(n):
            xy = mx[y]
            mxy = mul[xy]
            my = mul[y]
            for z in range(n):
                if mxy[z] != mx[my[z]]:
                    out.add(ASSOCIATIVITY, x, y, z)

    for g in range(n):
        for h in range(n):
            if ii[mul[g][h]] != mul[ii[h]][ii[g]]:
                out.add(ANTIHOMOMORPHISM, g, h)

    for j in ag.j_sorted:
        for g in range(n):
            if mul[j][g] != mul[g][j]:
                out.add(J_CENTRAL, j, g)

    for g in range(n):
        a, b = mul[g][ii[g]], mul[ii[g]][g]
        if a != b:
            out.add(NORM_SYMMETRIC, g)
        if not jm[a]:
            out.add(NORM_IN_J, g)
        if ii[ii[g]] != g:
            out.add(INVOLUTION, g)

    for j in ag.j_sorted:
        for k in ag.j_sorted:
            if not jm[mul[j][k]]:
                out.add(J_CLOSED_MUL, j, k)
        if not jm[ii[j]]:
            out.add(J_CLOSED_I, j)

    return out.report(ag.elements)


def require_valid(ag: AlmostGroup, what="almost group"):
    rep = ag.axiom_report
    if not rep.passed:
        raise AxiomError(f"{what} fails the almost-group axioms: "
                         f"{', '.join(rep.failed_axioms())}", rep)
    return ag


def mul(ag: AlmostGroup, x: int, y: int) -> int:
    _check_index(x, ag.size, "mul")
    _check_index(y, ag.size, "mul")
    return ag.mul[x][y]


def i_op(ag: AlmostGroup, x: int) -> int:
    _check_index(x, ag.size, "i")
    return ag.inv_i[x]


def in_J(ag: AlmostGroup, x: int) -> bool:
    _check_index(x, ag.size, "J membership")
    return ag.j_mask[x]


# ---------------------------------------------------------------- groups

def find_identity(table):
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            return e
    return None


def group_inverses(table, e):
    n = len(table)
    inv = []
    for x in range(n):
        for y in range(n):
            if table[x][y] == e and table[y][x] == e:
                inv.append(y)
                break
        else:
            return None
    return inv


def from_group(cayley_table, identity: int | None = None, labels=None) -> AlmostGroup:
    """A group as an almost group: ``J = {e}`` and ``i`` the group inverse."""
    table = tuple(tuple(int(v) for v in row) for row in cayley_table)
    n = len(table)
    if n == 0 or any(len(r) != n for r in table):
        raise StructureError("group table must be square and non-empty")
    for row in table:
        for v in row:
            _check_index(v, n, "group table")
    for x, y, z in itertools.product(range(n), repeat=3):
        if table[table[x][y]][z] != table[x][table[y][z]]:
            raise StructureError(f"not a group: associativity fails at {(x, y, z)}")
    if identity is None:
        identity = find_identity(table)
        if identity is None:
            raise StructureError("not a group: no identity element")
    else:
        _check_index(identity, n, "identity")
        if any(table[identity][x] != x or table[x][identity] != x for x in range(n)):
            raise StructureError(f"not a group: {identity} is not an identity")
    inv = group_inverses(table, identity)
    if inv is None:
        raise StructureError("not a group: some element has no inverse")
    if labels is None:
        labels = [str(k) for k in range(n)]
    return build(labels, table, inv, {identity})


def is_group(ag: AlmostGroup) -> bool:
    """True when ``ag`` is a group with ``J = {e}`` and ``i`` its inverse."""
    e = find_identity(ag.mul)
    if e is None or ag.J != frozenset({e}):
        return False
    return all(ag.mul[x][ag.inv_i[x]] == e for x in range(ag.size)) and ag.axiom_report.passed


def identity_of(ag: AlmostGroup):
    return find_identity(ag.mul)


def cyclic(n: int) -> AlmostGroup:
    if n < 1:
        raise StructureError("cyclic group order must be positive")
    return from_group([[(a + b) % n for b in range(n)] for a in range(n)], 0)


def symmetric_group(k: int = 3) -> AlmostGroup:
    """S_k on permutations of ``0..k-1``, composition ``(p*q)(x) = p(q(x))``."""
    perms = list(itertools.permutations(range(k)))
    pos = {p: a for a, p in enumerate(perms)}
    table = [[pos[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]
    labels = ["".join(map(str, p)) for p in perms]
    return from_group(table, pos[tuple(range(k))], labels)


def direct_product(A: AlmostGroup, B: AlmostGroup) -> AlmostGroup:
    """Componentwise product; ``J = J_A x J_B``; element (a, b) has index ``a*|B| + b``."""
    na, nb = A.size, B.size
    idx = lambda a, b: a * nb + b
    labels = [f"({A.elements[a]},{B.elements[b]})" for a in range(na) for b in range(nb)]
    table = [[idx(A.mul[a][c], B.mul[b][d]) for c in range(na) for d in range(nb)]
             for a in range(na) for b in range(nb)]
    inv = [idx(A.inv_i[a], B.inv_i[b]) for a in range(na) for b in range(nb)]
    J = [idx(a, b) for a in A.j_sorted for b in B.j_sorted]
    return build(labels, table, inv, J)


def pair_construction(A: AlmostGroup) -> AlmostGroup:
    """``A x A`` with ``(a,b)^i = (b,a)`` and diagonal ``J`` for an abelian group A."""
    if not is_group(A):
        raise StructureError("pair construction needs an abelian group")
    n = A.size
    if any(A.mul[a][b] != A.mul[b][a] for a in range(n) for b in range(n)):
        raise StructureError("pair construction needs an abelian group (J would not be central)")
    idx = lambda a, b: a * n + b
    labels = [f"({A.elements[a]},{A.elements[b]})" for a in range(n) for b in range(n)]
    table = [[idx(A.mul[a][c], A.mul[b][d]) for c in range(n) for d in range(n)]
             for a in range(n) for b in range(n)]
    inv = [idx(b, a) for a in range(n) for b in range(n)]
    J = [idx(a, a) for a in range(n)]
    return build(labels, table, inv, J)


def absorbing_triple() -> AlmostGroup:
    """{a, b, c} with every product equal to a, trivial i, J = {a, b}."""
    return build("abc", [[0] * 3 for _ in range(3)], [0, 1, 2], [0, 1])


def unital_triple() -> AlmostGroup:
    """{a, b, c} with a a two-sided unit, all other products b, trivial i, J = {a, b}."""
    table = [[0, 1, 2], [1, 1, 1], [2, 1, 1]]
    return build("abc", table, [0, 1, 2], [0, 1])


# ---------------------------------------------------------------- .agrp

def parse_agrp(text: str) -> AlmostGroup:
    """Parse the line-oriented ``.agrp`` format (see :func:`dump_agrp`)."""
    lines = []
    for k, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((k, line.split()))
    if not lines:
        raise ParseError("empty almost-group file")
    k, toks = lines[0]
    if toks[0] != "elements" or len(toks) < 2:
        raise ParseError("first line must be 'elements <lbl> ...'", k)
    elements = toks[1:]
    if len(set(elements)) != len(elements):
        raise ParseError("duplicate element labels", k)
    n = len(elements)
    pos = {e: a for a, e in enumerate(elements)}

    def resolve(lbl, lineno):
        try:
            return pos[lbl]
        except KeyError:
            raise ParseError(f"unknown element label {lbl!r}", lineno) from None

    if len(lines) != n + 3:
        raise ParseError(f"expected {n} 'row' lines followed by 'i' and 'J' lines "
                         f"({n + 3} lines in total), got {len(lines)}")
    table = []
    for r in range(n):
        k, toks = lines[1 + r]
        if toks[0] != "row" or len(toks) < 3 or toks[2] != ":":
            raise ParseError("expected 'row <lbl> : <lbl> ...'", k)
        if toks[1] != elements[r]:
            raise ParseError(f"row {r} must be for element {elements[r]!r}", k)
        vals = toks[3:]
        if len(vals) != n:
            raise ParseError(f"row has {len(vals)} entries, expected {n}", k)
        table.append([resolve(v, k) for v in vals])
    k, toks = lines[n + 1]
    if toks[0] != "i":
        raise ParseError("expected 'i <lbl> ...'", k)
    if len(toks) - 1 != n:
        raise ParseError(f"i line has {len(toks) - 1} entries, expected {n}", k)
    inv = [resolve(v, k) for v in toks[1:]]
    k, toks = lines[n + 2]
    if toks[0] != "J":
        raise ParseError("expected 'J <lbl> ...'", k)
    J = [resolve(v, k) for v in toks[1:]]
    return build(elements, table, inv, J)


def load_agrp(path) -> AlmostGroup:
    return parse_agrp(Path(path).read_text(encoding="utf-8"))


def dump_agrp(ag: AlmostGroup) -> str:
    e = ag.elements
    out = ["elements " + " ".join(e)]
    for x in range(ag.size):
        out.append(f"row {e[x]} : " + " ".join(e[v] for v in ag.mul[x]))
    out.append("i " + " ".join(e[v] for v in ag.inv_i))
    out.append("J " + " ".join(e[j] for j in ag.j_sorted))
    return "\n".join(out) + "\n"
