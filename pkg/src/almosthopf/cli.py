"""
Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical property is
false, 2 for unreadable input, usage errors and violated preconditions.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import almost_group as agm
from . import bicross_dual as bd
from . import hopf_core as hc
from . import loop_factor as lf
from . import matched_pair as mpm
from .errors import AxiomError, PoleError, PreconditionError, StructureError

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _seed(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS,
                        help="report format (default text)")
    common.add_argument("--output", default=argparse.SUPPRESS,
                        help="write the result to this file instead of stdout")

    p = _Parser(prog="almosthopf", description="Almost groups, almost Hopf algebras "
                "and matched pairs: exhaustive verification and structure export.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", default=None)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("verify-group", parents=[common], help="check almost-group axioms")
    g.add_argument("path")

    h = sub.add_parser("verify-hopf", parents=[common], help="check an almost Hopf algebra")
    h.add_argument("path")
    h.add_argument("--construction", choices=("fn", "grp"), required=True,
                   help="fn: function algebra k(G); grp: group algebra kG")

    b = sub.add_parser("bicross", parents=[common], help="bicrossproduct of a matched pair")
    b.add_argument("mpair")
    b.add_argument("--emit", choices=("structure", "report"), default=None)
    b.add_argument("--dual", action="store_true", help="use k(M) ◀▶ kG instead of kM ▷◀ k(G)")
    b.add_argument("--check", choices=("duality", "star", "selfdual"), default=None)

    lp = sub.add_parser("loop", help="numerical meromorphic loops")
    lsub = lp.add_subparsers(dest="loop_command", required=True, parser_class=_Parser)
    for name, helptext in (("reverse", "reverse two single-factor loops"),
                           ("act", "compute s▷u and s◁u"),
                           ("verify-matched", "matched-pair rules on (s,u,t,v) groups of files"),
                           ("verify-mutinv", "mutual-inverse rules on (s,u) pairs of files")):
        q = lsub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("files", nargs="+")
        q.add_argument("--samples", type=_positive_int, default=10)
        q.add_argument("--tol", type=_positive_float, default=1e-8)
        q.add_argument("--seed", type=_seed, default=0)
    return p


# ------------------------------------------------------------ commands

class Result:
    def __init__(self, code, text, data):
        self.code, self.text, self.data = code, text, data


def cmd_verify_group(path) -> Result:
    ag = agm.load_agrp(path)
    rep = agm.verify_axioms(ag)
    code = EXIT_OK if rep.passed else EXIT_FALSE
    text = ("PASS " if rep.passed else "") + rep.to_text()
    return Result(code, text, dict(rep.to_dict(), size=ag.size))


def cmd_verify_hopf(path, construction) -> Result:
    ag = agm.load_agrp(path)
    grep = agm.verify_axioms(ag)
    if not grep.passed:
        text = "input is not an almost group\n" + grep.to_text()
        return Result(EXIT_FALSE, text, {"passed": False, "group": grep.to_dict()})
    H = hc.function_algebra(ag) if construction == "fn" else hc.group_algebra(ag)
    rep = hc.verify_hopf(H)
    code = EXIT_OK if rep.passed else EXIT_FALSE
    data = dict(rep.to_dict(), construction=H.construction, dim=H.dim)
    return Result(code, rep.to_text(), data)


def cmd_bicross(path, emit=None, dual=False, check=None) -> Result:
    mp = mpm.load_mpair(path)
    mrep = mp.report
    if not mrep.passed:
        text = "not a matched pair\n" + mrep.to_text()
        return Result(EXIT_FALSE, text, {"passed": False, "matchedPair": mrep.to_dict()})
    H = bd.dual_bicrossproduct(mp) if dual else bd.bicrossproduct(mp)
    if emit is None:
        emit = "report" if check else "structure"

    rep = None
    if check == "duality":
        rep = bd.verify_duality(mp)
    elif check == "star":
        rep = bd.verify_star(mp)
    elif check == "selfdual":
        try:
            rep = bd.verify_self_duality(mp)
        except AxiomError as exc:
            return Result(EXIT_FALSE, f"not a mutually inverse matched pair: {exc}",
                          {"passed": False, "error": str(exc)})
    elif emit == "report":
        rep = hc.verify_hopf(H)
        if not dual:
            rep.merge(bd.verify_antipode_props(H), "")

    if emit == "structure":
        struct = hc.export_structure(H)
        if rep is None:
            return Result(EXIT_OK, json.dumps(struct, indent=2, ensure_ascii=False), struct)
        data = {"structure": struct, "report": rep.to_dict()}
        text = json.dumps(struct, indent=2, ensure_ascii=False) + "\n" + rep.to_text()
        return Result(EXIT_OK if rep.passed else EXIT_FALSE, text, data)
    return Result(EXIT_OK if rep.passed else EXIT_FALSE, rep.to_text(), rep.to_dict())


def _loops(files, group):
    loops = [lf.load_loop(f) for f in files]
    if len(loops) % group:
        raise UsageError(f"expected a multiple of {group} loop files, got {len(loops)}")
    return [tuple(loops[k:k + group]) for k in range(0, len(loops), group)]


def cmd_loop(sub, files, samples=10, tol=1e-8, seed=0) -> Result:
    if sub == "verify-matched":
        rep = lf.verify_matched_numeric(_loops(files, 4), samples, tol, seed)
        return Result(EXIT_OK if rep.passed else EXIT_FALSE, rep.to_text(), rep.to_dict())
    if sub == "verify-mutinv":
        rep = lf.verify_mutually_inverse_numeric(_loops(files, 2), samples, tol, seed)
        return Result(EXIT_OK if rep.passed else EXIT_FALSE, rep.to_text(), rep.to_dict())

    if len(files) != 2:
        raise UsageError(f"loop {sub} takes exactly two loop files")
    a, b = (lf.load_loop(f) for f in files)
    rng = np.random.default_rng(seed)
    if sub == "reverse":
        if len(a) != 1 or len(b) != 1:
            raise UsageError("loop reverse needs two single-factor loops")
        g1, g2 = lf.reverse_pair(a.factors[0], b.factors[0])
        lhs, rhs = lf.product(a, b), lf.MeromorphicLoop(a.n, (g1, g2))
        res = lf.residual(lhs, rhs, lf.sample_lambdas([a, b], samples, rng))
        branch = "degenerate" if lf.is_degenerate(a.factors[0].alpha, b.factors[0].alpha) else "generic"
        out = {"g1": lf.loop_to_dict(lf.MeromorphicLoop(a.n, (g1,))),
               "g2": lf.loop_to_dict(lf.MeromorphicLoop(a.n, (g2,))),
               "branch": branch, "residual": res, "tol": tol, "seed": seed,
               "lambdaSamples": samples, "passed": res <= tol}
        text = (f"{'PASS' if res <= tol else 'FAIL'} f1 f2 = g1 g2 ({branch} branch), "
                f"max residual {res:.3e} over {samples} λ\n"
                f"g1: pole {g1.alpha}\n{np.array2string(g1.P, precision=6)}\n"
                f"g2: pole {g2.alpha}\n{np.array2string(g2.P, precision=6)}")
        return Result(EXIT_OK if res <= tol else EXIT_FALSE, text, out)

    # act
    right, left = lf.act(a, b)
    lams = lf.sample_lambdas([a, b], samples, rng)
    res = lf.residual(lf.product(a, b), lf.product(right, left), lams)
    ok = res <= tol
    out = {"right": lf.loop_to_dict(right), "left": lf.loop_to_dict(left),
           "factorizationResidual": res, "tol": tol, "seed": seed,
           "lambdaSamples": samples, "passed": ok}
    text = (f"{'PASS' if ok else 'FAIL'} s u = (s▷u)(s◁u), max residual {res:.3e} over {samples} λ\n"
            f"s▷u poles: {right.poles}\ns◁u poles: {left.poles}")
    return Result(EXIT_OK if ok else EXIT_FALSE, text, out)


def _dispatch(args) -> Result:
    if args.command == "verify-group":
        return cmd_verify_group(args.path)
    if args.command == "verify-hopf":
        return cmd_verify_hopf(args.path, args.construction)
    if args.command == "bicross":
        return cmd_bicross(args.mpair, args.emit, args.dual, args.check)
    return cmd_loop(args.loop_command, args.files, args.samples, args.tol, args.seed)


def _write(text, output):
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.buffer.write((text + "\n").encode("utf-8"))
        sys.stdout.flush()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"almosthopf: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:     # --help
        return int(exc.code or 0)
    try:
        res = _dispatch(args)
    except (UsageError, StructureError, PreconditionError, PoleError, AxiomError) as exc:
        print(f"almosthopf: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"almosthopf: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        body = json.dumps(res.data, indent=2, ensure_ascii=False)
    else:
        body = res.text
    _write(body, args.output)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
