"""One test per acceptance criterion.  Each prints a single PASS/FAIL line
(also collected into the terminal summary)."""

import json
import time

import numpy as np
import pytest

from almosthopf import almost_group as ag
from almosthopf import bicross_dual as bd
from almosthopf import hopf_core as hc
from almosthopf import loop_factor as lf
from almosthopf import matched_pair as mpm
from almosthopf.cli import main as cli_main
from almosthopf.exact_linear import Fraction

from conftest import ACCEPTANCE_LINES, CATALOG


def report(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def trivial_instances(limit=64):
    for g, G in CATALOG.items():
        for m, M in CATALOG.items():
            if G.size * M.size <= limit:
                yield g, m, mpm.trivial_pair(G, M)


def test_criterion_1_almost_group_suite():
    problems, slowest = [], 0.0
    expected = {f"Z{n}" for n in range(1, 13)} | {"S3", "absorbing", "unital"} | {
        f"pair({a})" for a in ("Z2", "Z3", "Z4", "Z2xZ2")}
    assert expected <= set(CATALOG)
    for name in sorted(expected):
        t0 = time.perf_counter()
        rep = ag.verify_axioms(CATALOG[name])
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if not rep.passed:
            problems.append(f"{name}: {rep.failed_axioms()}")
        if dt >= 1.0:
            problems.append(f"{name}: {dt:.2f}s")
    ok = report(1, not problems, f"{len(expected)} structures, slowest {slowest * 1e3:.1f} ms"
                + (f"; {problems}" if problems else ""))
    assert ok


def _scale_antipode_entry(H):
    """Negative control: one antipode entry doubled."""
    return hc.mutate(H, "antipode", H.basis[0], 2 * H.antipode(hc.LinComb.basis(H.basis[0])))


def test_criterion_2_hopf_suite():
    t0 = time.perf_counter()
    problems, count, controls = [], 0, 0
    for name, G in sorted(CATALOG.items()):
        if G.size > 12:
            continue
        for H in (hc.function_algebra(G), hc.group_algebra(G)):
            count += 1
            rep = hc.verify_hopf(H)
            if not rep.passed or not rep["antipode_antimultiplicative"].passed:
                problems.append(f"{H.construction}({name}): {rep.failed()}")
            bad = hc.verify_hopf(_scale_antipode_entry(H))
            if bad.passed or not any(bad[n].witnesses for n in bad.failed()):
                problems.append(f"{H.construction}({name}): negative control not caught")
            else:
                controls += 1
    dt = time.perf_counter() - t0
    ok = report(2, not problems and dt < 30,
                f"{count} algebras pass, {controls} mutated copies fail with witnesses, {dt:.1f}s"
                + (f"; {problems}" if problems else ""))
    assert ok


def test_criterion_3_matched_pair_suite():
    t0 = time.perf_counter()
    problems, count = [], 0
    for g, m, mp in trivial_instances():
        count += 1
        rep = mpm.verify_matched(mp)
        if not rep.passed:
            problems.append(f"({g},{m}) matched: {rep.failed_axioms()}")
            continue
        if not ag.verify_axioms(mpm.doublecross(mp)).passed:
            problems.append(f"({g},{m}) doublecross")
        if rep.counts.get(mpm.NORM_LEFT) or rep.counts.get(mpm.NORM_RIGHT):
            problems.append(f"({g},{m}) norm identities")
    dt = time.perf_counter() - t0
    ok = report(3, not problems, f"{count} trivial pairs, matched + doublecross + norm "
                f"identities, {dt:.1f}s" + (f"; {problems[:5]}" if problems else ""))
    assert ok


def test_criterion_4_bicrossproduct_suite():
    t0 = time.perf_counter()
    problems, count = [], 0
    for g, m, mp in trivial_instances():
        count += 1
        rep = bd.verify_bicross(mp)
        if not rep.passed:
            problems.append(f"({g},{m}): {rep.failed()}")
    dt = time.perf_counter() - t0
    ok = report(4, not problems and dt < 120,
                f"{count} pairs: H and H' axioms, antipode props, 4 duality families, "
                f"star identities, {dt:.1f}s" + (f"; {problems[:5]}" if problems else ""))
    assert ok


def test_criterion_5_self_duality_suite():
    problems = []
    for n in (2, 3, 4, 5):
        Zn = ag.cyclic(n)
        mp = mpm.trivial_pair(Zn, Zn)
        data = bd.derive_inverse_data(mp)
        mut = bd.check_mutually_inverse(mp, data)
        if not mut.passed or len(mut.checks) != 5:
            problems.append(f"Z{n} mutual inverse: {mut.failed()}")
        rep = bd.verify_self_duality(mp, data)
        if not rep.passed:
            problems.append(f"Z{n} self-duality: {rep.failed()}")
        if rep["TS_bijective"].checked != n * n:
            problems.append(f"Z{n}: bijectivity checked on {rep['TS_bijective'].checked}")
    ok = report(5, not problems, "Z/n for n in 2..5: five mutual-inverse conditions, "
                "T∘S an isomorphism" + (f"; {problems}" if problems else ""))
    assert ok


def _loop_samples(seed):
    rng = np.random.default_rng(seed)
    out = []
    for n in (2, 3):
        for k in (1, 2, 3):
            u = lf.random_loop(rng, n, k, True)
            v = lf.random_loop(rng, n, k, True, avoid=u.poles)
            s = lf.random_loop(rng, n, k, False, avoid=u.poles + v.poles)
            t = lf.random_loop(rng, n, k, False, avoid=u.poles + v.poles + s.poles)
            out.append((s, u, t, v))
    return out


def test_criterion_6_loop_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_rev, pairs = 0.0, 0
    for n in (2, 3):
        for _ in range(50):
            u = lf.random_loop(rng, n, 1, True)
            s = lf.random_loop(rng, n, 1, False, avoid=u.poles)
            g1, g2 = lf.reverse_pair(s.factors[0], u.factors[0])
            lams = lf.sample_lambdas([s, u], 10, rng)
            worst_rev = max(worst_rev, lf.residual(s * u, lf.MeromorphicLoop(n, (g1, g2)), lams))
            pairs += 1
    worst_deg = 0.0
    for n in (2, 3):
        for _ in range(10):
            a = lf.random_pole(rng, True)
            f1 = lf.BasicFactor(a, lf.random_projection(n, int(rng.integers(0, n + 1)), rng))
            f2 = lf.BasicFactor(a.conjugate(), lf.random_projection(n, int(rng.integers(0, n + 1)), rng))
            g1, g2 = lf.reverse_pair(f1, f2)
            worst_deg = max(worst_deg, lf.laurent_residual([f1, f2], [g1, g2], a))
    samples = _loop_samples(7)
    mrep = lf.verify_matched_numeric(samples, n_lambda=10, tol=1e-8, seed=11, n_unitary=20)
    irep = lf.verify_mutually_inverse_numeric(samples, n_lambda=10, tol=1e-8, seed=12,
                                              n_unitary=20)
    unit = max(mrep.residuals["unitarity"], irep.residuals["unitarity"])
    dt = time.perf_counter() - t0
    ok = (worst_rev <= 1e-9 and worst_deg <= 1e-12 and mrep.passed and irep.passed
          and unit <= 1e-9 and dt < 60)
    report(6, ok, f"{pairs} reversals max {worst_rev:.1e}, degenerate Laurent max "
           f"{worst_deg:.1e}, matched max {max(mrep.residuals.values()):.1e}, "
           f"mutual-inverse max {max(irep.residuals.values()):.1e}, unitarity {unit:.1e}, "
           f"{dt:.1f}s")
    assert ok


def _suite_json(seed):
    samples = _loop_samples(seed)
    parts = {
        "matched": lf.verify_matched_numeric(samples, seed=seed).to_dict(),
        "mutinv": lf.verify_mutually_inverse_numeric(samples, seed=seed).to_dict(),
        "bicross": bd.verify_bicross(mpm.trivial_pair(ag.cyclic(3), CATALOG["pair(Z2)"])).to_dict(),
        "selfdual": bd.verify_self_duality(mpm.trivial_pair(ag.cyclic(4), ag.cyclic(4))).to_dict(),
        "structure": hc.export_structure(bd.dual_bicrossproduct(
            mpm.trivial_pair(CATALOG["S3"], ag.cyclic(2)))),
    }
    return json.dumps(parts, indent=2, ensure_ascii=False).encode("utf-8")


def test_criterion_7_determinism(tmp_path, capsys):
    same = _suite_json(3) == _suite_json(3)
    from pathlib import Path
    data = Path(__file__).resolve().parent.parent / "data"
    commands = [
        ["loop", "verify-mutinv", str(data / "s2.json"), str(data / "u2.json"), "--seed", "9"],
        ["loop", "act", str(data / "s1.json"), str(data / "u1.json"), "--seed", "9"],
        ["bicross", str(data / "z3_z3.mpair")],
        ["bicross", str(data / "z2_z2.mpair"), "--dual", "--emit", "report"],
    ]
    cli_same = True
    for c, cmd in enumerate(commands):
        outs = []
        for k in range(2):
            f = tmp_path / f"cli{c}_{k}.json"
            cli_main(["--format", "json", "--output", str(f)] + cmd)
            outs.append(f.read_bytes())
        cli_same &= outs[0] == outs[1] and len(outs[0]) > 0
    capsys.readouterr()
    ok = report(7, same and cli_same,
                "library and CLI JSON reports byte-identical on rerun with the same seed")
    assert ok
