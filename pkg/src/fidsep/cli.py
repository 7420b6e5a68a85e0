"""Command-line front end.

Fidelity is reported in the squared convention throughout,
``F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``, not its square root.

Exit codes: 0 success, 1 validation error, 2 solver did not converge (the
report is still written).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .convex_roof import MeasureReport, RoofOptions, entanglement_report, f_sep_mixed, measures_from_f_sep
from .core import DensityMatrix, PureState, SignatureError
from .fidelity import CONVENTION, fidelity, fidelity_pure, uhlmann_fidelity
from .io import dump_report, encode_complex, load_state
from .pure import SolverOptions, lambda_max_bipartite
from .two_qubit import two_qubit_report

EXIT_OK, EXIT_INVALID, EXIT_NOT_CONVERGED = 0, 1, 2


def parse_cut(text: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``"0,1|2"`` -> ``((0, 1), (2,))``; subsystems are numbered from 0."""
    try:
        left, right = text.split("|")
        return (
            tuple(int(i) for i in left.split(",") if i.strip()),
            tuple(int(i) for i in right.split(",") if i.strip()),
        )
    except ValueError:
        raise argparse.ArgumentTypeError(f"cut must look like '0,1|2', got {text!r}") from None


def _header(command: str, seed) -> dict:
    return {
        "tool": "fidsep",
        "version": __version__,
        "command": command,
        "fidelity_convention": CONVENTION,
        "seed": seed,
    }


def _report_doc(report: MeasureReport) -> dict:
    d = report.diagnostics
    dec, sep = report.best_decomposition, report.closest_separable
    return {
        "f_sep": report.f_sep,
        "e_ge": report.e_ge,
        "e_rge": report.e_rge,
        "e_gr": report.e_gr,
        "e_b": report.e_b,
        "best_decomposition": {
            "weights": [float(w) for w in dec.weights],
            "states": [encode_complex(s.amplitudes) for s in dec.states],
        },
        "closest_separable": {
            "weights": [float(w) for w in sep.weights],
            "branches": [[encode_complex(f) for f in b.factors] for b in sep.branches],
        },
        "diagnostics": {
            "restarts": d.restarts,
            "iterations": d.iterations,
            "converged": d.converged,
            "branches": d.branches,
            "method": d.method,
        },
    }


def _inner(args) -> SolverOptions:
    kw = {"seed": args.seed}
    if args.tol is not None:
        kw["tol"] = args.tol
    if args.command == "pure" and args.restarts is not None:
        kw["restarts"] = args.restarts
    return SolverOptions(**kw)


def cmd_pure(args) -> tuple[dict, bool, float]:
    state = load_state(args.input)
    if not isinstance(state, PureState):
        raise SignatureError("the pure command needs a state file of kind 'pure'")
    if args.cut is not None:
        res = lambda_max_bipartite(state, args.cut)
        f = res.lambda_max**2
        doc = {**measures_from_f_sep(f), "lambda_max": res.lambda_max, "cut": [list(c) for c in args.cut]}
        doc["argmax"] = [encode_complex(x) for x in res.argmax.factors]
        return doc, True, f
    rep = entanglement_report(state, RoofOptions(seed=args.seed, inner=_inner(args)))
    doc = _report_doc(rep)
    doc["lambda_max"] = rep.f_sep**0.5
    return doc, rep.diagnostics.converged, rep.f_sep


def cmd_mixed(args) -> tuple[dict, bool, float]:
    state = load_state(args.input)
    rho = state.density() if isinstance(state, PureState) else state
    kw = {"seed": args.seed, "inner": _inner(args), "method": args.method}
    if args.restarts is not None:
        kw["restarts"] = args.restarts
    if args.branches is not None:
        kw["branches"] = args.branches
    if args.tol is not None:
        kw["tol"] = args.tol
    rep = f_sep_mixed(rho, RoofOptions(**kw))
    return _report_doc(rep), rep.diagnostics.converged, rep.f_sep


def cmd_twoqubit(args) -> tuple[dict, bool, float]:
    rep = two_qubit_report(load_state(args.input))
    doc = {"concurrence": rep.concurrence, "e_ge": rep.e_ge, "f_sep": rep.f_sep, "e_b": rep.e_b}
    return doc, True, rep.concurrence


def cmd_fidelity(args) -> tuple[dict, bool, float]:
    a, b = load_state(args.input), load_state(args.other)
    doc = {"fidelity": fidelity(a, b), "uhlmann_fidelity": uhlmann_fidelity(a, b)}
    if isinstance(a, PureState) and isinstance(b, DensityMatrix):
        doc["fidelity_pure"] = fidelity_pure(a, b)
    return doc, True, doc["fidelity"]


def cmd_verify(args) -> tuple[dict, bool, float]:
    from .verify import run_all

    results = run_all(args.level)
    for r in results:
        print(r.line(), file=sys.stderr)
    doc = {
        "level": args.level,
        "checks": [{"id": r.key, "title": r.title, "passed": r.passed, "detail": r.detail} for r in results],
        "passed": all(r.passed for r in results),
    }
    return doc, True, float(doc["passed"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fidsep",
        description=(
            "Fidelity of separability and geometric entanglement measures. "
            "Fidelity uses the squared convention (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."
        ),
    )
    parser.add_argument("--version", action="version", version=f"fidsep {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, solver=True):
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("full", "value"), default="full",
                       help="full JSON report or just the headline number")
        if solver:
            p.add_argument("--seed", type=int, default=42)
            p.add_argument("--restarts", type=int)
            p.add_argument("--tol", type=float, help="convergence threshold on objective change")

    p = sub.add_parser("pure", help="Lambda_max, F_sep and derived measures of a pure state")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--cut", type=parse_cut, help="bipartition such as '0|1,2' (0-based subsystems)")
    common(p)

    p = sub.add_parser("mixed", help="F_sep of a density matrix by convex-roof optimization")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--branches", type=int, help="decomposition size m, rank <= m <= rank^2")
    p.add_argument("--method", choices=("polar", "geodesic"), default="polar")
    common(p)

    p = sub.add_parser("twoqubit", help="closed forms from the concurrence")
    p.add_argument("--in", dest="input", required=True)
    common(p, solver=False)

    p = sub.add_parser("fidelity", help="fidelity between two states (squared convention)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--with", dest="other", required=True)
    common(p, solver=False)

    p = sub.add_parser("verify", help="run the built-in acceptance checks")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    common(p, solver=False)
    return parser


COMMANDS = {
    "pure": cmd_pure,
    "mixed": cmd_mixed,
    "twoqubit": cmd_twoqubit,
    "fidelity": cmd_fidelity,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        body, converged, value = COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"fidsep: error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    doc = {**_header(args.command, getattr(args, "seed", None)), **body}
    text = f"{value!r}\n" if args.format == "value" else dump_report(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if args.command == "verify" and not body["passed"]:
        return EXIT_INVALID
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


if __name__ == "__main__":
    sys.exit(main())
