"""
Meromorphic matrix loops carried as ordered products of basic factors.

A basic factor is ``Φ_{α,P}(λ) = P⊥ + θ_α(λ) P`` with ``θ_α(λ) = (λ−ᾱ)/(λ−α)``,
``P`` a Hermitian projection and ``α`` off the real axis.  Each factor is
unitary for real λ and tends to the identity as |λ| -> ∞.

Loops with all poles in the upper half plane form G, lower half plane M.
The actions ``s ▷ u`` and ``s ◁ u`` are found by moving the factors of u
leftward through those of s, one pole-reversal at a time, so that
``s u = (s ▷ u)(s ◁ u)``.  Loops are never refactored; only reordered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError, PoleError, PreconditionError, StructureError

TOL_H = 1e-10        # Hermitian / idempotent tolerance for projections
TOL_U = 1e-9         # unitarity on the real axis
POLE_EPS = 1e-12     # evaluation refused this close to a pole
DEGENERATE = 1e-9    # relative |β − ᾱ| below which the β = ᾱ branch is used
MAX_N = 8


def theta(alpha: complex, lam: complex) -> complex:
    return (lam - np.conj(alpha)) / (lam - alpha)


def as_projection(P, tol=TOL_H) -> np.ndarray:
    """Validated read-only complex copy of a Hermitian projection."""
    P = np.array(P, dtype=complex)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 1:
        raise StructureError(f"projection must be a square matrix, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise StructureError("projection has non-finite entries")
    if np.linalg.norm(P - P.conj().T) > tol:
        raise StructureError("projection is not Hermitian")
    if np.linalg.norm(P @ P - P) > tol:
        raise StructureError("projection is not idempotent")
    P.setflags(write=False)
    return P


def projection_onto(V: np.ndarray, rank: int) -> np.ndarray:
    """Orthogonal projection onto the span of the first ``rank`` left singular vectors of V."""
    n = V.shape[0]
    if rank == 0:
        return np.zeros((n, n), dtype=complex)
    U, _, _ = np.linalg.svd(V)
    Q = U[:, :rank]
    P = Q @ Q.conj().T
    return 0.5 * (P + P.conj().T)


def _basis_of_image(P: np.ndarray):
    """Orthonormal basis (columns) of the image of a projection, and its rank."""
    w, V = np.linalg.eigh(P)
    cols = V[:, w > 0.5]
    return cols, cols.shape[1]


@dataclass(frozen=True, eq=False)
class BasicFactor:
    alpha: complex
    P: np.ndarray

    def __post_init__(self):
        a = complex(self.alpha)
        if not np.isfinite(a.real) or not np.isfinite(a.imag):
            raise StructureError("pole must be finite")
        if a.imag == 0:
            raise StructureError(f"pole {a} lies on the real axis")
        object.__setattr__(self, "alpha", complex(a.real + 0.0, a.imag + 0.0))
        object.__setattr__(self, "P", as_projection(self.P))

    @property
    def n(self):
        return self.P.shape[0]

    @property
    def upper(self):
        return self.alpha.imag > 0

    def eval(self, lam) -> np.ndarray:
        if abs(lam - self.alpha) <= POLE_EPS:
            raise PoleError(f"evaluation at λ={lam} is at the pole {self.alpha}")
        I = np.eye(self.n, dtype=complex)
        return I - self.P + theta(self.alpha, lam) * self.P

    def complement(self) -> "BasicFactor":
        """Same pole with P replaced by P⊥; complementing twice gives back P bit for bit."""
        perp = self.__dict__.get("_perp")
        if perp is None:
            perp = np.eye(self.n, dtype=complex) - self.P
        out = BasicFactor(self.alpha, perp)
        out.__dict__["_perp"] = self.P
        return out

    def is_scalar(self, tol=TOL_H):
        """P is 0 or 1, i.e. the factor is a scalar function times the identity."""
        I = np.eye(self.n)
        return np.linalg.norm(self.P) <= tol or np.linalg.norm(self.P - I) <= tol

    def __eq__(self, other):
        return (isinstance(other, BasicFactor) and self.alpha == other.alpha
                and np.array_equal(self.P, other.P))

    def __repr__(self):
        return f"BasicFactor(alpha={self.alpha!r}, rank={int(round(np.trace(self.P).real))})"


@dataclass(frozen=True, eq=False)
class MeromorphicLoop:
    n: int
    factors: tuple = field(default=())

    def __post_init__(self):
        if not (1 <= self.n <= MAX_N):
            raise StructureError(f"matrix size must be between 1 and {MAX_N}")
        fs = tuple(self.factors)
        for f in fs:
            if not isinstance(f, BasicFactor):
                raise StructureError("loop factors must be BasicFactor instances")
            if f.n != self.n:
                raise StructureError(f"factor of size {f.n} in a loop of size {self.n}")
        object.__setattr__(self, "factors", fs)

    def __len__(self):
        return len(self.factors)

    def __eq__(self, other):
        return (isinstance(other, MeromorphicLoop) and self.n == other.n
                and len(self.factors) == len(other.factors)
                and all(a == b for a, b in zip(self.factors, other.factors)))

    def __mul__(self, other):
        return product(self, other)

    @property
    def poles(self):
        return [f.alpha for f in self.factors]

    def eval(self, lam) -> np.ndarray:
        return eval_loop(self, lam)


def identity_loop(n: int) -> MeromorphicLoop:
    return MeromorphicLoop(n, ())


def basic(alpha, P) -> MeromorphicLoop:
    f = BasicFactor(alpha, P)
    return MeromorphicLoop(f.n, (f,))


def product(a: MeromorphicLoop, b: MeromorphicLoop) -> MeromorphicLoop:
    if a.n != b.n:
        raise StructureError(f"cannot multiply loops of sizes {a.n} and {b.n}")
    return MeromorphicLoop(a.n, a.factors + b.factors)


def eval_loop(loop: MeromorphicLoop, lam) -> np.ndarray:
    """Ordered product of the factor values, left to right."""
    out = np.eye(loop.n, dtype=complex)
    for f in loop.factors:
        out = out @ f.eval(lam)
    return out


def i_op(loop: MeromorphicLoop) -> MeromorphicLoop:
    """Reverse the factors and swap each P for P⊥ (poles unchanged)."""
    return MeromorphicLoop(loop.n, tuple(f.complement() for f in reversed(loop.factors)))


def inverse(loop: MeromorphicLoop) -> MeromorphicLoop:
    """Reverse the factors and conjugate each pole."""
    return MeromorphicLoop(loop.n, tuple(BasicFactor(f.alpha.conjugate(), f.P)
                                         for f in reversed(loop.factors)))


def in_J(loop: MeromorphicLoop, tol=TOL_H) -> bool:
    return all(f.is_scalar(tol) for f in loop.factors)


def all_upper(loop):
    return all(f.upper for f in loop.factors)


def all_lower(loop):
    return all(not f.upper for f in loop.factors)


# ------------------------------------------------------------ pole reversal

def is_degenerate(alpha: complex, beta: complex) -> bool:
    return abs(beta - alpha.conjugate()) <= DEGENERATE * max(1.0, abs(alpha))


def reverse_pair(f1: BasicFactor, f2: BasicFactor):
    """Rewrite ``f1 f2`` (poles α, β in opposite half planes) as ``g1 g2``.

    ``g1`` has pole β and ``g2`` pole α.  Generically
    ``V3 = (P1⊥ + θ_α(β) P1) V2`` and ``V4 = (P3⊥ + θ_β(α)^{-1} P3) V1``,
    V_k being the image of P_k.  When β = ᾱ (to a relative 1e-9) the
    continuous choice ``P3 = 1 − P1``, ``P4 = 1 − P2`` is taken instead.
    """
    if f1.n != f2.n:
        raise StructureError("factors have different sizes")
    a, b = f1.alpha, f2.alpha
    if a.imag * b.imag >= 0:
        raise PreconditionError(f"poles {a} and {b} are not in opposite half planes")
    n = f1.n
    I = np.eye(n, dtype=complex)
    if is_degenerate(a, b):
        return BasicFactor(b, I - f1.P), BasicFactor(a, I - f2.P)
    P1, P2 = f1.P, f2.P
    V2, r2 = _basis_of_image(P2)
    A = I - P1 + theta(a, b) * P1
    P3 = projection_onto(A @ V2, r2)
    V1, r1 = _basis_of_image(P1)
    B = I - P3 + P3 / theta(b, a)
    P4 = projection_onto(B @ V1, r1)
    return BasicFactor(b, P3), BasicFactor(a, P4)


def laurent_coefficients(factors, alpha: complex) -> dict:
    """Coefficients in z = θ_α(λ) of a product of factors with poles α or ᾱ.

    A factor with pole α is ``P⊥ + z P``; one with pole ᾱ is ``P⊥ + z^{-1} P``.
    Returns ``{power: matrix}``.
    """
    factors = list(factors)
    n = factors[0].n if factors else 1
    I = np.eye(n, dtype=complex)
    poly = {0: I}
    for f in factors:
        if f.alpha == alpha:
            k = 1
        elif f.alpha == alpha.conjugate():
            k = -1
        else:
            raise StructureError(f"pole {f.alpha} is neither {alpha} nor its conjugate")
        step = {0: I - f.P, k: f.P}
        out: dict = {}
        for p, A in poly.items():
            for q, B in step.items():
                out[p + q] = out.get(p + q, 0) + A @ B
        poly = out
    return poly


def laurent_residual(lhs, rhs, alpha: complex) -> float:
    """Largest Frobenius difference between matching Laurent coefficients."""
    L = laurent_coefficients(lhs, alpha)
    R = laurent_coefficients(rhs, alpha)
    zero = 0
    return max(float(np.linalg.norm(L.get(p, zero) - R.get(p, zero))) for p in set(L) | set(R))


# ------------------------------------------------------------ actions

def check_act_preconditions(s: MeromorphicLoop, u: MeromorphicLoop):
    """s must have lower poles, u upper poles, and no pole of s may sit at
    the conjugate of a pole of u."""
    if s.n != u.n:
        raise PreconditionError(f"loops have different sizes {s.n} and {u.n}")
    for f in s.factors:
        if f.upper:
            raise PreconditionError(f"s has pole {f.alpha} in the upper half plane")
    for f in u.factors:
        if not f.upper:
            raise PreconditionError(f"u has pole {f.alpha} in the lower half plane")
    for f in s.factors:
        for g in u.factors:
            if is_degenerate(f.alpha, g.alpha):
                raise PreconditionError(
                    f"poles {f.alpha} and {g.alpha} are at complex conjugate positions")


def act(s: MeromorphicLoop, u: MeromorphicLoop):
    """(s ▷ u, s ◁ u) by successive pole reversals; len(s)·len(u) reversals."""
    check_act_preconditions(s, u)
    lower = list(s.factors)
    upper = []
    for g in u.factors:
        for j in range(len(lower) - 1, -1, -1):
            g, lower[j] = reverse_pair(lower[j], g)
        upper.append(g)
    return MeromorphicLoop(s.n, tuple(upper)), MeromorphicLoop(s.n, tuple(lower))


def act_right(s, u) -> MeromorphicLoop:
    return act(s, u)[0]


def act_left(s, u) -> MeromorphicLoop:
    return act(s, u)[1]


# ------------------------------------------------------------ sampling

def sample_lambdas(loops, count: int, rng, lo=-10.0, hi=10.0):
    """``count`` real points in [lo, hi] at least 1e-6 away from every pole's real part."""
    reals = [f.alpha.real for L in loops for f in L.factors]
    out = []
    while len(out) < count:
        lam = float(rng.uniform(lo, hi))
        if all(abs(lam - r) > 1e-6 for r in reals):
            out.append(lam)
    return out


def residual(lhs: MeromorphicLoop, rhs: MeromorphicLoop, lams) -> float:
    return max((float(np.linalg.norm(eval_loop(lhs, x) - eval_loop(rhs, x))) for x in lams),
               default=0.0)


def unitarity_residual(loop: MeromorphicLoop, lams) -> float:
    I = np.eye(loop.n)
    res = 0.0
    for x in lams:
        F = eval_loop(loop, x)
        res = max(res, float(np.linalg.norm(F.conj().T @ F - I)))
    return res


def normalization_residual(loop: MeromorphicLoop, radius=1e8) -> float:
    I = np.eye(loop.n)
    return max(float(np.linalg.norm(eval_loop(loop, z) - I))
               for z in (radius, -radius, 1j * radius, -1j * radius))


def random_projection(n: int, rank: int, rng) -> np.ndarray:
    Z = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    Q, _ = np.linalg.qr(Z)
    P = Q @ Q.conj().T
    return 0.5 * (P + P.conj().T)


def random_pole(rng, upper: bool, avoid=(), sep=0.5) -> complex:
    """Pole with |im| in [0.5, 2], re in [-3, 3], at least ``sep`` from the
    conjugates of (and from) every pole in ``avoid``."""
    while True:
        a = complex(rng.uniform(-3, 3), rng.uniform(0.5, 2.0) * (1 if upper else -1))
        if all(abs(a - b.conjugate()) >= sep and abs(a - b) >= sep for b in avoid):
            return a


def random_loop(rng, n: int, k: int, upper: bool, avoid=()) -> MeromorphicLoop:
    """k basic factors with random proper projections (rank between 1 and n-1 when n > 1)."""
    avoid = list(avoid)
    fs = []
    for _ in range(k):
        a = random_pole(rng, upper, avoid)
        avoid.append(a)
        rank = int(rng.integers(1, n)) if n > 1 else int(rng.integers(0, 2))
        fs.append(BasicFactor(a, random_projection(n, rank, rng)))
    return MeromorphicLoop(n, tuple(fs))


# ------------------------------------------------------------ reports

@dataclass
class NumericReport:
    """Max residual per identity over all sampled tuples and λ."""
    kind: str
    tol: float
    seed: int
    n_lambda: int
    tuples: int
    residuals: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r <= self.tol for r in self.residuals.values())

    def record(self, name, value):
        self.residuals[name] = max(self.residuals.get(name, 0.0), float(value))

    def failed(self):
        return [k for k, r in self.residuals.items() if r > self.tol]

    def to_dict(self):
        return {"kind": self.kind, "passed": self.passed, "seed": self.seed,
                "tol": self.tol, "lambdaSamples": self.n_lambda, "tuples": self.tuples,
                "identities": [{"name": k, "maxResidual": r, "passed": r <= self.tol}
                               for k, r in self.residuals.items()]}

    def to_text(self):
        lines = [f"{self.kind}: {self.tuples} tuple(s), {self.n_lambda} λ samples, "
                 f"seed {self.seed}, tol {self.tol:g}"]
        for k, r in self.residuals.items():
            lines.append(f"{'PASS' if r <= self.tol else 'FAIL'} {k}  max residual {r:.3e}")
        return "\n".join(lines)


def verify_matched_numeric(samples, n_lambda=10, tol=1e-8, seed=0, n_unitary=20) -> NumericReport:
    """Matched-pair rules for loops, by evaluation at random real λ.

    ``samples`` is a list of ``(s, u, t, v)`` with s, t lower-pole loops and
    u, v upper-pole loops.  Precondition violations raise before any work.
    """
    samples = [tuple(x) for x in samples]
    for s, u, t, v in samples:
        for a in (s, t, product(s, t)):
            for b in (u, v, product(u, v)):
                check_act_preconditions(a, b)
    rng = np.random.default_rng(seed)
    rep = NumericReport("matched", tol, seed, n_lambda, len(samples))
    for s, u, t, v in samples:
        su_r, su_l = act(s, u)
        tu_r, tu_l = act(t, u)
        st = product(s, t)
        uv = product(u, v)
        st_r, st_l = act(st, u)
        s_tu_r, s_tu_l = act(s, tu_r)
        s_uv_r, s_uv_l = act(s, uv)
        sl_v_r, sl_v_l = act(su_l, v)
        ir_r, ir_l = act(i_op(su_l), i_op(su_r))
        made = [su_r, su_l, tu_r, tu_l, st_r, st_l, s_tu_r, s_tu_l, s_uv_r, s_uv_l,
                sl_v_r, sl_v_l, ir_r, ir_l]
        lams = sample_lambdas([s, u, t, v], n_lambda, rng)
        rep.record("factorization", residual(product(s, u), product(su_r, su_l), lams))
        rep.record("right_over_product_M", residual(s_tu_r, st_r, lams))
        rep.record("left_over_product_M", residual(product(s_tu_l, tu_l), st_l, lams))
        rep.record("right_over_product_G", residual(s_uv_r, product(su_r, sl_v_r), lams))
        rep.record("left_over_product_G", residual(sl_v_l, s_uv_l, lams))
        rep.record("i_rule_right", residual(ir_r, i_op(u), lams))
        rep.record("i_rule_left", residual(ir_l, i_op(s), lams))
        ulams = sample_lambdas([s, u, t, v], n_unitary, rng)
        rep.record("unitarity", max(unitarity_residual(L, ulams) for L in [s, u, t, v] + made))
    return rep


def verify_mutually_inverse_numeric(samples, n_lambda=10, tol=1e-8, seed=0,
                                    n_unitary=20) -> NumericReport:
    """Inverse compatibility of the loop actions, by evaluation.

    ``samples`` is a list of ``(s, u)`` (extra entries are ignored), s with
    lower and u with upper poles.  Checks ``u^{-1} ▷ s^{-1} = (s ◁ u)^{-1}``,
    ``u^{-1} ◁ s^{-1} = (s ▷ u)^{-1}``, ``(x^{-1})^i = (x^i)^{-1}`` for x in
    {s, u, s▷u, s◁u}, and unitarity of every loop involved.
    """
    pairs = [(x[0], x[1]) for x in samples]
    for s, u in pairs:
        check_act_preconditions(s, u)
        check_act_preconditions(inverse(u), inverse(s))
    rng = np.random.default_rng(seed)
    rep = NumericReport("mutually_inverse", tol, seed, n_lambda, len(pairs))
    for s, u in pairs:
        su_r, su_l = act(s, u)
        inv_r, inv_l = act(inverse(u), inverse(s))
        lams = sample_lambdas([s, u], n_lambda, rng)
        rep.record("inverse_right", residual(inv_r, inverse(su_l), lams))
        rep.record("inverse_left", residual(inv_l, inverse(su_r), lams))
        rep.record("inverse_commutes_with_i",
                   max(residual(i_op(inverse(x)), inverse(i_op(x)), lams)
                       for x in (s, u, su_r, su_l)))
        ulams = sample_lambdas([s, u], n_unitary, rng)
        rep.record("unitarity", max(unitarity_residual(L, ulams)
                                    for L in (s, u, su_r, su_l, inv_r, inv_l)))
    return rep


# ------------------------------------------------------------ JSON

def _matrix_from_json(rows, n, where):
    try:
        M = np.array([[complex(float(e[0]), float(e[1])) for e in row] for row in rows])
    except (TypeError, ValueError, IndexError):
        raise ParseError(f"{where}: entries must be [re, im] pairs") from None
    if M.shape != (n, n):
        raise ParseError(f"{where}: expected a {n}x{n} matrix, got shape {M.shape}")
    return M


def loop_from_dict(obj) -> MeromorphicLoop:
    if not isinstance(obj, dict) or "n" not in obj or "factors" not in obj:
        raise ParseError("loop JSON needs keys 'n' and 'factors'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError("'n' must be an integer")
    fs = []
    for k, f in enumerate(obj["factors"]):
        where = f"factor {k}"
        try:
            a = complex(float(f["alphaRe"]), float(f["alphaIm"]))
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"{where}: needs numeric alphaRe and alphaIm") from None
        if "P" not in f:
            raise ParseError(f"{where}: missing P")
        P = _matrix_from_json(f["P"], n, where)
        try:
            fs.append(BasicFactor(a, P))
        except StructureError as exc:
            raise ParseError(f"{where}: {exc}") from None
    try:
        return MeromorphicLoop(n, tuple(fs))
    except StructureError as exc:
        raise ParseError(str(exc)) from None


def loop_to_dict(loop: MeromorphicLoop) -> dict:
    return {"n": loop.n, "factors": [
        {"alphaRe": f.alpha.real, "alphaIm": f.alpha.imag,
         "P": [[[float(x.real), float(x.imag)] for x in row] for row in f.P]}
        for f in loop.factors]}


def load_loop(path) -> MeromorphicLoop:
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return loop_from_dict(obj)


def dump_loop(loop: MeromorphicLoop) -> str:
    return json.dumps(loop_to_dict(loop), indent=2)
