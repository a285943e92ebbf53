import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from almosthopf import loop_factor as lf
from almosthopf.errors import ParseError, PoleError, PreconditionError, StructureError

E1 = np.diag([1.0, 0.0])
HALF = np.full((2, 2), 0.5)
I2 = np.eye(2)


def rng(seed=0):
    return np.random.default_rng(seed)


def separated_pair(r, n, k_s, k_u):
    u = lf.random_loop(r, n, k_u, True)
    s = lf.random_loop(r, n, k_s, False, avoid=u.poles)
    return s, u


# ---- evaluation

def test_eval_basic_factor():
    got = lf.basic(1j, E1).eval(2)
    ratio = (2 + 1j) / (2 - 1j)
    assert abs(ratio - (3 + 4j) / 5) < 1e-15
    assert np.allclose(got, np.diag([(3 + 4j) / 5, 1]), atol=1e-15)


def test_empty_loop_is_identity():
    assert np.array_equal(lf.identity_loop(3).eval(0.7), np.eye(3))


def test_eval_at_pole_raises():
    with pytest.raises(PoleError):
        lf.basic(1 + 1j, E1).eval(1 + 1j)


def test_factor_validation():
    with pytest.raises(StructureError):
        lf.BasicFactor(2.0, E1)                       # real pole
    with pytest.raises(StructureError):
        lf.BasicFactor(1j, np.array([[1, 1], [0, 0]]))  # not Hermitian
    with pytest.raises(StructureError):
        lf.BasicFactor(1j, 2 * I2)                     # not idempotent
    with pytest.raises(StructureError):
        lf.product(lf.basic(1j, E1), lf.identity_loop(3))


def test_in_j_for_scalar_factors():
    assert lf.in_J(lf.MeromorphicLoop(2, (lf.BasicFactor(1j, I2), lf.BasicFactor(-1j, 0 * I2))))
    assert not lf.in_J(lf.basic(1j, E1))


# ---- i and inverse

def test_i_op_single_factor():
    L = lf.basic(1 + 2j, E1)
    Li = lf.i_op(L)
    assert Li.poles == [1 + 2j]
    assert np.allclose(Li.factors[0].P, I2 - E1)


def test_i_op_is_involution():
    L = lf.random_loop(rng(1), 3, 3, True)
    assert lf.i_op(lf.i_op(L)) == L


def test_i_op_reverses_products():
    r = rng(2)
    A, B = lf.random_loop(r, 2, 2, True), lf.random_loop(r, 2, 1, False)
    lhs = lf.i_op(A * B)
    rhs = lf.i_op(B) * lf.i_op(A)
    lams = lf.sample_lambdas([A, B], 10, r)
    assert lf.residual(lhs, rhs, lams) <= 1e-9


def test_inverse():
    r = rng(3)
    L = lf.random_loop(r, 3, 3, True)
    inv = lf.inverse(L)
    assert lf.inverse(inv) == L
    assert inv.poles == [p.conjugate() for p in reversed(L.poles)]
    for lam in lf.sample_lambdas([L], 10, r):
        assert np.linalg.norm(inv.eval(lam) @ L.eval(lam) - np.eye(3)) <= 1e-9


def test_inverse_and_i_commute_exactly_on_a_factor():
    L = lf.basic(0.5 + 1j, HALF)
    a = lf.i_op(lf.inverse(L))
    b = lf.inverse(lf.i_op(L))
    assert a == b
    assert a.poles == [0.5 - 1j] and np.allclose(a.factors[0].P, I2 - HALF)


# ---- pole reversal

def test_reverse_pair_worked_example():
    f1, f2 = lf.BasicFactor(1j, E1), lf.BasicFactor(-2j, HALF)
    assert abs(lf.theta(1j, -2j) - 1 / 3) < 1e-15
    g1, g2 = lf.reverse_pair(f1, f2)
    assert g1.alpha == -2j and g2.alpha == 1j
    assert np.allclose(g1.P, np.array([[1, 3], [3, 9]]) / 10, atol=1e-12)
    lams = lf.sample_lambdas([], 10, rng(4))
    lhs = lf.MeromorphicLoop(2, (f1, f2))
    rhs = lf.MeromorphicLoop(2, (g1, g2))
    assert lf.residual(lhs, rhs, lams) <= 1e-9


def test_reverse_pair_degenerate_branch():
    r = rng(5)
    a = 0.3 + 1.2j
    f1 = lf.BasicFactor(a, lf.random_projection(3, 1, r))
    f2 = lf.BasicFactor(a.conjugate(), lf.random_projection(3, 2, r))
    g1, g2 = lf.reverse_pair(f1, f2)
    assert np.allclose(g1.P, np.eye(3) - f1.P) and np.allclose(g2.P, np.eye(3) - f2.P)
    assert lf.laurent_residual([f1, f2], [g1, g2], a) <= 1e-12


def test_laurent_coefficients_of_single_factor():
    f = lf.BasicFactor(1j, E1)
    coeffs = lf.laurent_coefficients([f], 1j)
    assert set(coeffs) == {0, 1}
    assert np.allclose(coeffs[1], E1) and np.allclose(coeffs[0], I2 - E1)
    with pytest.raises(StructureError):
        lf.laurent_coefficients([f, lf.BasicFactor(2j, E1)], 1j)


def test_reverse_identity_factors():
    g1, g2 = lf.reverse_pair(lf.BasicFactor(1j, 0 * I2), lf.BasicFactor(-3j, 0 * I2))
    assert np.allclose(g1.P, 0) and np.allclose(g2.P, 0)


@pytest.mark.parametrize("P1,P2", [(0 * I2, HALF), (I2, HALF), (E1, 0 * I2), (E1, I2)])
def test_reverse_with_trivial_projections(P1, P2):
    f1, f2 = lf.BasicFactor(-1j, P1), lf.BasicFactor(2 + 1j, P2)
    g1, g2 = lf.reverse_pair(f1, f2)
    lams = lf.sample_lambdas([], 10, rng(6))
    assert lf.residual(lf.MeromorphicLoop(2, (f1, f2)), lf.MeromorphicLoop(2, (g1, g2)), lams) <= 1e-9


def test_reverse_same_half_plane_rejected():
    with pytest.raises(PreconditionError):
        lf.reverse_pair(lf.BasicFactor(1j, E1), lf.BasicFactor(2j, E1))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_reverse_pair_preserves_product(seed, n):
    r = rng(seed)
    s, u = separated_pair(r, n, 1, 1)
    g1, g2 = lf.reverse_pair(s.factors[0], u.factors[0])
    lams = lf.sample_lambdas([s, u], 10, r)
    assert lf.residual(s * u, lf.MeromorphicLoop(n, (g1, g2)), lams) <= 1e-9


# ---- actions

def test_single_reversal_action(monkeypatch):
    calls = []
    orig = lf.reverse_pair
    monkeypatch.setattr(lf, "reverse_pair", lambda a, b: calls.append(1) or orig(a, b))
    s, u = separated_pair(rng(7), 2, 1, 1)
    right, left = lf.act(s, u)
    assert len(calls) == 1
    lams = lf.sample_lambdas([s, u], 10, rng(8))
    assert lf.residual(s * u, right * left, lams) <= 1e-9


def test_two_by_two_action(monkeypatch):
    calls = []
    orig = lf.reverse_pair
    monkeypatch.setattr(lf, "reverse_pair", lambda a, b: calls.append(1) or orig(a, b))
    s, u = separated_pair(rng(9), 2, 2, 2)
    right, left = lf.act(s, u)
    assert len(calls) == 4
    assert right.poles == u.poles and left.poles == s.poles
    lams = lf.sample_lambdas([s, u], 10, rng(10))
    assert lf.residual(s * u, right * left, lams) <= 1e-8


def test_identity_u_acts_trivially():
    s = lf.random_loop(rng(11), 2, 2, False)
    right, left = lf.act(s, lf.identity_loop(2))
    assert right == lf.identity_loop(2) and left == s


def test_action_preconditions():
    u = lf.basic(0.5 + 1j, HALF)
    with pytest.raises(PreconditionError):
        lf.act(lf.basic(0.5 - 1j, E1), u)          # conjugate positions
    with pytest.raises(PreconditionError):
        lf.act(lf.basic(1j, E1), u)                # s in the wrong half plane
    with pytest.raises(PreconditionError):
        lf.act(lf.basic(-1j, E1), lf.basic(-2j, E1))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 3))
def test_action_pole_bookkeeping(seed, ks, ku):
    s, u = separated_pair(rng(seed), 2, ks, ku)
    right, left = lf.act(s, u)
    assert right.poles == u.poles and left.poles == s.poles
    assert lf.all_upper(right) and lf.all_lower(left)


# ---- numeric verification

def test_matched_numeric_single_factors():
    r = rng(12)
    u, v = lf.random_loop(r, 2, 1, True), None
    v = lf.random_loop(r, 2, 1, True, avoid=u.poles)
    s = lf.random_loop(r, 2, 1, False, avoid=u.poles + v.poles)
    t = lf.random_loop(r, 2, 1, False, avoid=u.poles + v.poles + s.poles)
    rep = lf.verify_matched_numeric([(s, u, t, v)], n_lambda=10, tol=1e-8, seed=1)
    assert rep.passed, rep.to_text()
    assert set(rep.residuals) >= {"factorization", "right_over_product_M", "left_over_product_M",
                                  "right_over_product_G", "left_over_product_G",
                                  "i_rule_right", "i_rule_left", "unitarity"}


def test_matched_numeric_identity_loops_exact():
    one = lf.identity_loop(2)
    s = lf.random_loop(rng(13), 2, 2, False)
    rep = lf.verify_matched_numeric([(s, one, one, one)], seed=2)
    assert all(v == 0.0 for k, v in rep.residuals.items() if k != "unitarity")


def test_matched_numeric_rejects_conjugate_poles():
    u = lf.basic(0.5 + 1j, HALF)
    s = lf.basic(0.5 - 1j, E1)
    with pytest.raises(PreconditionError):
        lf.verify_matched_numeric([(s, u, s, u)])


def test_mutinv_single_factor():
    s, u = separated_pair(rng(14), 2, 1, 1)
    rep = lf.verify_mutually_inverse_numeric([(s, u)], n_lambda=10, tol=1e-8, seed=3)
    assert rep.passed, rep.to_text()


def test_mutinv_identity_loops_zero():
    one = lf.identity_loop(2)
    rep = lf.verify_mutually_inverse_numeric([(one, one)])
    assert all(v == 0.0 for v in rep.residuals.values())


def test_report_json_is_deterministic():
    s, u = separated_pair(rng(15), 3, 2, 2)
    a = json.dumps(lf.verify_mutually_inverse_numeric([(s, u)], seed=4).to_dict())
    b = json.dumps(lf.verify_mutually_inverse_numeric([(s, u)], seed=4).to_dict())
    assert a == b


def test_sample_lambdas_avoid_pole_real_parts():
    L = lf.basic(0.25 + 1j, E1)
    lams = lf.sample_lambdas([L], 200, rng(16))
    assert all(-10 <= x <= 10 and abs(x - 0.25) > 1e-6 for x in lams)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 3]), st.integers(0, 3))
def test_loops_unitary_and_normalized(seed, n, k):
    r = rng(seed)
    L = lf.random_loop(r, n, k, bool(seed % 2))
    assert lf.unitarity_residual(L, lf.sample_lambdas([L], 20, r)) <= 1e-9
    assert lf.normalization_residual(L) <= 1e-6


# ---- JSON

def test_loop_json_roundtrip(tmp_path):
    L = lf.random_loop(rng(17), 3, 2, True)
    p = tmp_path / "l.json"
    p.write_text(lf.dump_loop(L))
    assert lf.load_loop(p) == L


@pytest.mark.parametrize("obj", [
    [],
    {"n": 2},
    {"n": "2", "factors": []},
    {"n": 2, "factors": [{"alphaRe": 0, "alphaIm": 1}]},
    {"n": 2, "factors": [{"alphaRe": 0, "alphaIm": 1, "P": [[[1, 0]]]}]},
    {"n": 2, "factors": [{"alphaRe": 0, "alphaIm": 0, "P": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}]},
    {"n": 2, "factors": [{"alphaRe": 0, "alphaIm": 1, "P": [[1, 0], [0, 0]]}]},
    {"n": 9, "factors": []},
])
def test_bad_loop_json(obj):
    with pytest.raises(ParseError):
        lf.loop_from_dict(obj)


def test_invalid_json_text(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        lf.load_loop(p)
