"""Command-line front end: ``malevich {qubit,qutrit,twoqubit,bounds,scan}``."""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
import warnings
from typing import Any, Sequence

import numpy as np

from . import __version__, bounds, formats, qubit, qutrit, scans, two_qubit
from .exceptions import BadDiagonal, MalevichError, NotDensity, NotPositiveWarning
from .numerics import check_density, purity

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_POSITIVITY = 3
EXIT_UNPHYSICAL = 4
EXIT_BOUND_MISS = 5
EXIT_IO = 6

# typed decimals carry about seven digits, far coarser than the library default
CLASS_TOL = 1e-6

FAMILY_FLAGS = {
    "center": two_qubit.Family.CENTER_BLOCK,
    "corner": two_qubit.Family.CORNER_BLOCK,
    "embed1": two_qubit.Family.QUTRIT_EMBED_1,
    "embed2": two_qubit.Family.QUTRIT_EMBED_2,
    "embed3": two_qubit.Family.QUTRIT_EMBED_3,
    "embed4": two_qubit.Family.QUTRIT_EMBED_4,
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _floats(text: str, count: int, name: str) -> list[float]:
    parts = [s for s in text.replace(" ", ",").split(",") if s]
    try:
        vals = [float(s) for s in parts]
    except ValueError:
        raise CliError(EXIT_PARSE, f"{name}: expected {count} comma-separated numbers, got {text!r}") from None
    if len(vals) != count:
        raise CliError(EXIT_PARSE, f"{name}: expected {count} numbers, got {len(vals)}")
    for v in vals:
        if not (0.0 <= v <= 1.0) or math.isnan(v):
            raise CliError(EXIT_PARSE, f"{name}: probability {v!r} is outside [0, 1]")
    return vals


def _read_matrix(path: str, dim: int) -> np.ndarray:
    try:
        m = formats.read_matrix(path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    except formats.MatrixFileError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    if m.shape != (dim, dim):
        raise CliError(EXIT_PARSE, f"{path}: expected a {dim}x{dim} matrix, got dim {m.shape[0]}")
    return m


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from None
    with fh:
        yield fh


def _emit(args, command: str, report: dict) -> None:
    with _output(args.out) as out:
        if args.format == "json":
            out.write(formats.dumps(report))
        else:
            pairs = formats.flatten(formats.to_jsonable(report))
            formats.write_csv(out, command, ("key", "value"), pairs)


# ---------------------------------------------------------------- commands


def qubit_report(p: Sequence[float], class_tol: float = CLASS_TOL) -> dict[str, Any]:
    t = qubit.as_triple(p)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotPositiveWarning)
        rho = qubit.qubit_from_probabilities(t)
    geo = qubit.triangle_sides(t)
    quantum = t.is_quantum
    return {
        "probabilities": list(t),
        "density_matrix": rho,
        "bloch_vector": list(qubit.bloch_vector(t)),
        "sides": list(geo.sides),
        "areas": list(geo.areas),
        "S": qubit.area_sum(t),
        "S_L": qubit.linear_entropy(t),
        "quantumness_residual": t.residual,
        "quantum": quantum,
        "not_positive": not quantum,
        "class": qubit.classify_pure_maxima(t, tol=class_tol).value if quantum else None,
    }


def cmd_qubit(args) -> int:
    p = _floats(args.p, 3, "--p")
    report = qubit_report(p, args.class_tol)
    if args.strict and report["not_positive"]:
        _emit(args, "qubit", report)
        raise CliError(EXIT_POSITIVITY, f"{tuple(p)} is outside the quantum ball")
    _emit(args, "qubit", report)
    return EXIT_OK


def qutrit_report(rho: np.ndarray) -> dict[str, Any]:
    c = qutrit.component_qubits(rho)
    return {
        "density_matrix": rho,
        "components": {k: list(v) for k, v in c._asdict().items()},
        "S_per_qubit": {k: qubit.area_sum(v) for k, v in c._asdict().items()},
        "S_total": qutrit.qutrit_area_sum(c),
        "S_total_ABD": qutrit.qutrit_area_sum_abd(c),
        "S_L": qutrit.qutrit_linear_entropy(c),
        "S_L_from_qubits": qutrit.qutrit_linear_entropy_from_qubits(c),
        "S_L_qubit_sum": sum(qubit.linear_entropy(t) for t in (c.A, c.B, c.D)),
        "one_minus_purity": 1.0 - purity(rho),
        "psd": True,
    }


def _qutrit_from_args(args) -> np.ndarray:
    if args.matrix:
        m = _read_matrix(args.matrix, 3)
        try:
            return check_density(m, dim=3)
        except NotDensity as exc:
            raise CliError(EXIT_POSITIVITY, f"{args.matrix}: {exc}") from None
    v = _floats(args.abd, 8, "--abd")
    try:
        rec = qutrit.qutrit_from_probabilities(v[0:3], v[3:6], (v[6], v[7], 1.0 - v[5]))
    except BadDiagonal as exc:
        raise CliError(EXIT_POSITIVITY, str(exc)) from None
    if not rec.is_psd:
        raise CliError(EXIT_POSITIVITY, f"reconstructed qutrit has eigenvalue {rec.min_eigenvalue:.3g} < 0")
    return rec.matrix


def cmd_qutrit(args) -> int:
    rho = _qutrit_from_args(args)
    _emit(args, "qutrit", qutrit_report(rho))
    return EXIT_OK


def twoqubit_report(state: two_qubit.TwoQubitDensity, closed: two_qubit.ClosedForm) -> dict[str, Any]:
    rep = two_qubit.entanglement_report(state)
    area = two_qubit.family_area(state)
    return {
        "family": state.family.value,
        "density_matrix": state.matrix,
        "physical": True,
        "negativity": rep.negativity,
        "log_negativity": rep.log_negativity,
        "concurrence": rep.concurrence,
        "concurrence_closed_form": closed.value,
        "ppt_verdict": rep.ppt_verdict.value,
        "pt_eigenvalues": list(rep.pt_eigenvalues),
        "S": area,
        "area_witness": two_qubit.area_witness(state.family, area).value,
        "separable_area_bound": two_qubit.SEPARABLE_AREA_BOUND[state.family],
    }


def _unphysical_report(family, closed: two_qubit.ClosedForm, S: float | None) -> dict[str, Any]:
    return {
        "family": family.value,
        "physical": False,
        "concurrence_closed_form": closed.value,
        "S": S,
    }


def cmd_twoqubit(args) -> int:
    family = FAMILY_FLAGS[args.family]
    block = family in (two_qubit.Family.CENTER_BLOCK, two_qubit.Family.CORNER_BLOCK)
    if block:
        if args.p is None:
            raise CliError(EXIT_PARSE, f"--family {args.family} needs --p p1,p2,p3")
        p = qubit.ProbabilityTriple(*_floats(args.p, 3, "--p"))
        closed = two_qubit.concurrence_closed_form(family, p)
        if not closed.physical:
            if not args.allow_unphysical:
                raise CliError(EXIT_UNPHYSICAL, f"{tuple(p)} is outside the quantum ball; no state exists")
            _emit(args, "twoqubit", _unphysical_report(family, closed, qubit.area_sum(p)))
            return EXIT_OK
        build = two_qubit.center_block_state if family is two_qubit.Family.CENTER_BLOCK else two_qubit.corner_block_state
        state = build(p)
    else:
        placement = int(args.family[-1])
        if args.qutrit:
            R = _read_matrix(args.qutrit, 3)
            try:
                R = check_density(R, dim=3)
            except NotDensity as exc:
                raise CliError(EXIT_UNPHYSICAL, f"{args.qutrit}: {exc}") from None
        elif args.abd:
            v = _floats(args.abd, 8, "--abd")
            A, B, D = tuple(v[0:3]), tuple(v[3:6]), (v[6], v[7], 1.0 - v[5])
            try:
                rec = qutrit.qutrit_from_probabilities(A, B, D)
            except BadDiagonal as exc:
                raise CliError(EXIT_UNPHYSICAL, str(exc)) from None
            if not rec.is_psd:
                comps = qutrit.ComponentQubits(
                    qubit.ProbabilityTriple(*A), qubit.ProbabilityTriple(*B),
                    qubit.ProbabilityTriple(A[0], A[1], A[2] + B[2] - 1.0), qubit.ProbabilityTriple(*D),
                )
                if not args.allow_unphysical:
                    raise CliError(EXIT_UNPHYSICAL, "the A, B, D probabilities give no positive qutrit")
                closed = two_qubit.concurrence_closed_form(family, comps)
                _emit(args, "twoqubit", _unphysical_report(family, closed, qutrit.qutrit_area_sum(comps)))
                return EXIT_OK
            R = rec.matrix
        else:
            raise CliError(EXIT_PARSE, f"--family {args.family} needs --qutrit FILE or --abd")
        state = two_qubit.qutrit_embed_state(R, placement)
        closed = two_qubit.concurrence_closed_form(family, R)
    _emit(args, "twoqubit", twoqubit_report(state, closed))
    return EXIT_OK


def cmd_bounds(args) -> int:
    report = bounds.reproduce_bound(args.problem, seed=args.seed, sense=args.sense)
    out = report._asdict()
    out["within_tolerance"] = report.within_tolerance
    _emit(args, "bounds", out)
    if report.within_tolerance is False:
        raise CliError(
            EXIT_BOUND_MISS,
            f"{report.problem} {report.sense} = {report.extremum_value:.10g} misses "
            f"{report.target:.10g} +/- {report.tolerance:g}",
        )
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.resolution < 2:
        raise CliError(EXIT_PARSE, "--resolution must be at least 2")
    if args.target == "coherent_fig6":
        scan = scans.coherent_fig6(args.resolution, -1 if args.jx_sign == "-" else 1)
    else:
        scan = scans.SCANS[args.target](args.resolution)
    with _output(args.out) as out:
        formats.write_csv(out, f"scan {args.target}", scan.columns, scan.rows)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="malevich",
        description="Probability and triangle-area analysis of qubit, qutrit and two-qubit states.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write to this file instead of stdout")
        p.add_argument("--seed", type=int, default=42)

    p = sub.add_parser("qubit", help="analyze a qubit given (p1, p2, p3)")
    p.add_argument("--p", required=True, help="p1,p2,p3")
    p.add_argument("--strict", action="store_true", help="exit 3 if the triple is outside the quantum ball")
    p.add_argument("--class-tol", type=float, default=CLASS_TOL, help="coordinate tolerance for the maxima class")
    common(p)
    p.set_defaults(func=cmd_qubit)

    p = sub.add_parser("qutrit", help="decompose a qutrit into component qubits")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix", help="JSON matrix file {dim, re, im}")
    g.add_argument("--abd", help="pA1,pA2,pA3,pB1,pB2,pB3,pD1,pD2")
    common(p)
    p.set_defaults(func=cmd_qutrit)

    p = sub.add_parser("twoqubit", help="entanglement of two-qubit states with inaccessible levels")
    p.add_argument("--family", required=True, choices=sorted(FAMILY_FLAGS))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--p", help="p1,p2,p3 for the center and corner families")
    g.add_argument("--qutrit", help="JSON 3x3 matrix file for the embed families")
    g.add_argument("--abd", help="pA1,pA2,pA3,pB1,pB2,pB3,pD1,pD2 for the embed families")
    p.add_argument("--allow-unphysical", action="store_true", help="report closed forms for non-states")
    common(p)
    p.set_defaults(func=cmd_twoqubit)

    p = sub.add_parser("bounds", help="reproduce an extremal area sum")
    p.add_argument("--problem", required=True, choices=sorted(bounds.PROBLEMS))
    p.add_argument("--sense", choices=("max", "min"), default="max")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("scan", help="emit a figure grid as CSV")
    p.add_argument("--target", required=True, choices=scans.SCAN_TARGETS)
    p.add_argument("--resolution", type=int, default=201)
    p.add_argument("--jx-sign", choices=("+", "-"), default="+", help="branch of <Jx> for coherent_fig6")
    common(p, fmt=False)
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"malevich: error: {exc}", file=sys.stderr)
        return exc.code
    except MalevichError as exc:
        print(f"malevich: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
