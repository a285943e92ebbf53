import itertools

import pytest
from hypothesis import given, settings, strategies as st

from almosthopf import almost_group as ag
from almosthopf.errors import ParseError, StructureError

from conftest import CATALOG


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_structures_pass(name):
    rep = ag.verify_axioms(CATALOG[name])
    assert rep.passed, rep.to_text()


def test_singleton():
    G = ag.build(["e"], [[0]], [0], [0])
    assert ag.verify_axioms(G).passed


def test_absorbing_triple_data():
    G = ag.absorbing_triple()
    assert G.elements == ("a", "b", "c")
    assert all(G.mul[x][y] == 0 for x in range(3) for y in range(3))
    assert G.inv_i == (0, 1, 2) and set(G.J) == {0, 1}


def test_unital_triple_data():
    G = ag.unital_triple()
    assert [G.mul[0][x] for x in range(3)] == [0, 1, 2]
    assert G.mul[1][2] == G.mul[2][2] == G.mul[2][1] == 1


def test_non_square_table_rejected():
    with pytest.raises(StructureError):
        ag.build(["a", "b"], [[0, 1], [1]], [0, 1], [0])


def test_out_of_range_entry_rejected():
    with pytest.raises(StructureError):
        ag.build(["a", "b"], [[0, 1], [1, 2]], [0, 1], [0])


def test_identity_involution_on_z3_fails_norm_in_j():
    Z3 = ag.cyclic(3)
    bad = ag.build(Z3.elements, Z3.mul, [0, 1, 2], [0])
    rep = ag.verify_axioms(bad)
    assert not rep.passed
    wit = [v.witness for v in rep.violations if v.axiom == ag.NORM_IN_J]
    assert (1,) in wit          # 1 + 1 = 2 is not in J
    assert Z3.mul[1][1] == 2


def test_z2_from_group():
    G = ag.from_group([[0, 1], [1, 0]])
    assert G.J == frozenset({0}) and G.inv_i[1] == 1
    assert ag.is_group(G)


def test_s3_inverse_is_inverse_permutation():
    G = ag.symmetric_group(3)
    assert G.size == 6
    for k, lab in enumerate(G.elements):
        perm = [int(ch) for ch in lab]
        inv = [0] * 3
        for pos, v in enumerate(perm):
            inv[v] = pos
        assert G.elements[G.inv_i[k]] == "".join(map(str, inv))
    assert ag.verify_axioms(G).passed


def test_table_without_identity_rejected():
    with pytest.raises(StructureError):
        ag.from_group([[0, 0], [0, 0]])


def test_pair_construction_z2():
    P = ag.pair_construction(ag.cyclic(2))
    assert P.size == 4
    assert {P.elements[j] for j in P.J} == {"(0,0)", "(1,1)"}
    assert P.elements[P.inv_i[P.index["(0,1)"]]] == "(1,0)"


def test_pair_construction_z3():
    P = ag.pair_construction(ag.cyclic(3))
    assert P.size == 9 and len(P.J) == 3
    assert ag.verify_axioms(P).passed


def test_pair_construction_rejects_nonabelian():
    with pytest.raises(StructureError):
        ag.pair_construction(ag.symmetric_group(3))


def test_element_helpers():
    G = ag.cyclic(4)
    assert ag.mul(G, 3, 3) == 2
    assert ag.i_op(G, 1) == 3
    assert ag.in_J(G, 0) and not ag.in_J(G, 2)


def test_direct_product_is_group():
    G = ag.direct_product(ag.cyclic(2), ag.cyclic(3))
    assert G.size == 6 and ag.is_group(G)


def test_agrp_roundtrip():
    for G in (ag.absorbing_triple(), ag.symmetric_group(3), ag.pair_construction(ag.cyclic(2))):
        back = ag.parse_agrp(ag.dump_agrp(G))
        assert back.elements == G.elements and back.mul == G.mul
        assert back.inv_i == G.inv_i and back.J == G.J


@pytest.mark.parametrize("text", [
    "",
    "row 0 : 0\ni 0\nJ 0\n",
    "elements a b\nrow a : a b\nrow b : b\ni a b\nJ a\n",
    "elements a\nrow a : z\ni a\nJ a\n",
    "elements a a\nrow a : a a\nrow a : a a\ni a a\nJ a\n",
])
def test_malformed_agrp(text):
    with pytest.raises(ParseError):
        ag.parse_agrp(text)


def test_report_serialization():
    bad = ag.build(["a", "b"], [[0, 1], [1, 1]], [1, 0], [0])
    rep = ag.verify_axioms(bad)
    d = rep.to_dict()
    assert d["passed"] is False and d["violations"]
    assert all(isinstance(w, str) for v in d["violations"] for w in v["witness"])
    assert "FAIL" in rep.to_text()


def test_witness_cap_keeps_full_counts():
    Z3 = ag.cyclic(3)
    bad = ag.build(Z3.elements, [[0] * 3] * 3, [0, 2, 1], [0])
    rep = ag.verify_axioms(bad, limit=1)
    assert all(rep.counts[a] >= 1 for a in rep.failed_axioms())
    assert len(rep.violations) == len(rep.failed_axioms())


# ---- properties

@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5))
def test_products_of_cyclic_groups_pass(m, n):
    assert ag.verify_axioms(ag.direct_product(ag.cyclic(m), ag.cyclic(n))).passed


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.data())
def test_any_single_table_mutation_is_caught(n, data):
    G = ag.cyclic(n)
    x = data.draw(st.integers(0, n - 1))
    y = data.draw(st.integers(0, n - 1))
    v = data.draw(st.integers(0, n - 1).filter(lambda v: v != G.mul[x][y]))
    table = [list(r) for r in G.mul]
    table[x][y] = v
    rep = ag.verify_axioms(ag.build(G.elements, table, G.inv_i, G.J))
    assert not rep.passed


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(CATALOG)))
def test_axioms_against_brute_force(name):
    G = CATALOG[name]
    n, m, i = G.size, G.mul, G.inv_i
    for x, y, z in itertools.product(range(n), repeat=3):
        assert m[m[x][y]][z] == m[x][m[y][z]]
    for x, y in itertools.product(range(n), repeat=2):
        assert i[m[x][y]] == m[i[y]][i[x]]
    for x in range(n):
        assert m[x][i[x]] in G.J and m[x][i[x]] == m[i[x]][x] and i[i[x]] == x
