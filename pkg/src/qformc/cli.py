"""``qformc``: batch front-end over the JSON file formats.

Exit status is 0 on success, 1 on a domain failure (no flow, invalid
tableau, verification mismatch, size cap) and 2 on a usage or format
error.  The primary JSON artifact goes to ``--out`` or stdout;
verification reports and diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

import numpy as np

from qformc import formats
from qformc.circuit import Circuit, expand_j_gates
from qformc.clifford import (
    LeuvenTableau,
    clifford_pattern,
    clifford_to_qfe,
    random_tableau,
    validate_tableau,
)
from qformc.errors import FormatError, InvalidTableauError, NoFlowError, QformcError
from qformc.flows import (
    Flow,
    Geometry,
    check_gflow,
    find_flow,
    find_fractional_edge_flow,
    find_gflow,
    is_fractional_edge_flow,
)
from qformc.pattern import MeasurementPattern
from qformc.qfe import DEFAULT_MAX_VERTICES, QFE, evaluate_dense, induced_geometry
from qformc.synthesis import (
    circuit_from_flow,
    circuit_to_qfe,
    pattern_from_gflow,
    qft_qfe,
    standardize_pattern,
)
from qformc.verify import (
    DEFAULT_TOL,
    DenseView,
    align,
    branches_agree,
    check_pauli_conjugation,
    max_deviation,
    positive_branch,
    proportional_up_to_scalar,
    simulate_circuit_dense,
    simulate_pattern_branches,
    verification_report,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="inp", metavar="PATH", help="input artifact (default: stdin)")
    common.add_argument("--out", metavar="PATH", help="write the artifact here instead of stdout")
    common.add_argument("--verify", action="store_true", help="check the result with a dense oracle")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized verbs (default 0)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="entrywise tolerance (default 1e-9)")
    common.add_argument(
        "--max-dense-vertices",
        type=int,
        default=DEFAULT_MAX_VERTICES,
        help="cap on QFE size for dense evaluation (default 22)",
    )

    parser = _Parser(prog="qformc", description="Compile quadratic form expansions to patterns and circuits.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    helps = {
        "geometry": "QFE to its weighted geometry",
        "flow": "search a causal flow (unit edges only)",
        "gflow": "search a generalized flow",
        "fflow": "search a fractional-edge flow",
        "synth-pattern": "QFE to a standard measurement pattern via gflow",
        "synth-circuit": "QFE to a circuit via a fractional-edge flow",
        "clifford-qfe": "tableau to a QFE with disjoint inputs and outputs",
        "clifford-pattern": "tableau to a measurement pattern",
        "circuit-to-qfe": "circuit over H, J, Z, CZ to a QFE",
    }
    for verb, text in helps.items():
        sub.add_parser(verb, parents=[common], help=text)
    p = sub.add_parser("qft", parents=[common], help="QFE of the n-qubit Fourier transform")
    p.add_argument("n", type=int)
    p = sub.add_parser("verify", parents=[common], help="check two artifacts agree up to a scalar")
    p.add_argument("a")
    p.add_argument("b")
    p = sub.add_parser("random-tableau", parents=[common], help="uniformly scrambled valid tableau")
    p.add_argument("n", type=int)
    return parser


# -- helpers -----------------------------------------------------------------


def _read(args, *kinds: str):
    if args.inp is None or args.inp == "-":
        artifact = formats.loads(sys.stdin.read())
    else:
        artifact = formats.load(args.inp)
    expected = {
        "qfe": QFE,
        "geometry": Geometry,
        "circuit": Circuit,
        "pattern": MeasurementPattern,
        "tableau": LeuvenTableau,
    }
    if not any(isinstance(artifact, expected[k]) for k in kinds):
        raise FormatError(f"expected a {' or '.join(kinds)} file, got {type(artifact).__name__}")
    return artifact


def _write(args, artifact) -> None:
    text = formats.dumps(artifact)
    if args.out:
        formats.dump(artifact, args.out)
    else:
        print(text)


def _geometry(artifact) -> Geometry:
    return induced_geometry(artifact) if isinstance(artifact, QFE) else artifact


def _dense(artifact, max_vertices: int) -> DenseView:
    if isinstance(artifact, QFE):
        return DenseView(evaluate_dense(artifact, max_vertices), artifact.outputs, artifact.inputs)
    if isinstance(artifact, Circuit):
        m = simulate_circuit_dense(artifact)
        cols = None
        if artifact.initial_labels is not None:
            cols = tuple(artifact.initial_labels[w] for w in artifact.input_wires)
        return DenseView(m, artifact.final_labels, cols)
    if isinstance(artifact, MeasurementPattern):
        return DenseView(positive_branch(artifact), artifact.outputs, artifact.inputs)
    if isinstance(artifact, LeuvenTableau):
        return DenseView(evaluate_dense(clifford_to_qfe(artifact).qfe, max_vertices), None, None)
    raise FormatError(f"{type(artifact).__name__} has no dense matrix")


def _compare(a: np.ndarray, b: np.ndarray, tol: float) -> tuple[complex | None, float]:
    if a.shape != b.shape:
        raise QformcError(f"shape mismatch: {a.shape} vs {b.shape}")
    c = proportional_up_to_scalar(a, b, tol)
    if c is not None:
        return c, max_deviation(a, b, c)
    pivot = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    return None, max_deviation(a, b, a[pivot] / b[pivot])


def _emit_report(report: dict) -> int:
    print(json.dumps(report), file=sys.stderr)
    return 0 if report["status"] == "ok" else 1


def _dft(n: int) -> np.ndarray:
    dim = 1 << n
    j = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(j, j) / dim) / np.sqrt(dim)


# -- verbs -------------------------------------------------------------------


def _cmd_geometry(args) -> int:
    q = _read(args, "qfe")
    _write(args, induced_geometry(q))
    return 0


def _cmd_search(args) -> int:
    geom = _geometry(_read(args, "qfe", "geometry"))
    search = {"flow": find_flow, "gflow": find_gflow, "fflow": find_fractional_edge_flow}[args.verb]
    found = search(geom)
    if found is None:
        raise NoFlowError(f"no {args.verb} exists for this geometry")
    _write(args, found)
    if args.verify:
        if args.verb == "fflow":
            problems = [] if is_fractional_edge_flow(geom, found) else ["not a fractional-edge flow"]
        else:
            cand = found.as_gflow() if isinstance(found, Flow) else found
            problems = check_gflow(geom, cand)
        return _emit_report(verification_report(1 + 0j if not problems else None, 0.0, problems))
    return 0


def _cmd_synth_pattern(args) -> int:
    q = _read(args, "qfe")
    gf = find_gflow(induced_geometry(q))
    if gf is None:
        raise NoFlowError("no gflow exists for this geometry")
    p = standardize_pattern(pattern_from_gflow(q, gf))
    _write(args, p)
    if args.verify:
        reports = simulate_pattern_branches(p)
        ok, worst, failing = branches_agree(reports, args.tol)
        ref = next(r for r in reports if not any(r.branch.values()))
        c, err = _compare(ref.map, evaluate_dense(q, args.max_dense_vertices), args.tol)
        return _emit_report(verification_report(c, max(worst, err), failing))
    return 0


def _cmd_synth_circuit(args) -> int:
    q = _read(args, "qfe")
    fl = find_fractional_edge_flow(induced_geometry(q))
    if fl is None:
        raise NoFlowError("no fractional-edge flow exists for this geometry")
    c = circuit_from_flow(q, fl)
    _write(args, c)
    if args.verify:
        u = simulate_circuit_dense(c, output_labels=q.outputs)
        scalar, err = _compare(u, evaluate_dense(q, args.max_dense_vertices), args.tol)
        return _emit_report(verification_report(scalar, err))
    return 0


def _tableau(args) -> LeuvenTableau:
    tab = _read(args, "tableau")
    problems = validate_tableau(tab)
    if problems:
        raise InvalidTableauError("; ".join(problems))
    return tab


def _conjugation_report(q: QFE, tab: LeuvenTableau, args) -> dict:
    u = evaluate_dense(q, args.max_dense_vertices)
    failing = check_pauli_conjugation(u, tab, args.tol)
    return verification_report(1 + 0j, 0.0, [f"P_{t}" for t in failing])


def _cmd_clifford_qfe(args) -> int:
    tab = _tableau(args)
    exp = clifford_to_qfe(tab)
    _write(args, exp.qfe)
    if args.verify:
        return _emit_report(_conjugation_report(exp.qfe, tab, args))
    return 0


def _cmd_clifford_pattern(args) -> int:
    tab = _tableau(args)
    p = clifford_pattern(tab)
    _write(args, p)
    if args.verify:
        q = clifford_to_qfe(tab).qfe
        conj = _conjugation_report(q, tab, args)
        reports = simulate_pattern_branches(p)
        ok, worst, failing = branches_agree(reports, args.tol)
        ref = next(r for r in reports if not any(r.branch.values()))
        c, err = _compare(ref.map, evaluate_dense(q, args.max_dense_vertices), args.tol)
        failing = list(failing) + conj["failing_branches"]
        return _emit_report(verification_report(c, max(worst, err), failing))
    return 0


def _cmd_circuit_to_qfe(args) -> int:
    c = _read(args, "circuit")
    q = circuit_to_qfe(expand_j_gates(c))
    _write(args, q)
    if args.verify:
        scalar, err = _compare(
            evaluate_dense(q, args.max_dense_vertices), simulate_circuit_dense(c), args.tol
        )
        return _emit_report(verification_report(scalar, err))
    return 0


def _cmd_qft(args) -> int:
    if args.n < 1:
        raise FormatError("qft needs n >= 1")
    q = qft_qfe(args.n)
    _write(args, q)
    if args.verify:
        scalar, err = _compare(evaluate_dense(q, args.max_dense_vertices), _dft(args.n), args.tol)
        return _emit_report(verification_report(scalar, err))
    return 0


def _cmd_verify(args) -> int:
    a = _dense(formats.load(args.a), args.max_dense_vertices)
    b = _dense(formats.load(args.b), args.max_dense_vertices)
    scalar, err = _compare(a.matrix, align(a, b), args.tol)
    report = verification_report(scalar, err)
    print(json.dumps(report))
    return 0 if report["status"] == "ok" else 1


def _cmd_random_tableau(args) -> int:
    if args.n < 1:
        raise FormatError("random-tableau needs n >= 1")
    _write(args, random_tableau(args.n, args.seed))
    return 0


_VERBS = {
    "geometry": _cmd_geometry,
    "flow": _cmd_search,
    "gflow": _cmd_search,
    "fflow": _cmd_search,
    "synth-pattern": _cmd_synth_pattern,
    "synth-circuit": _cmd_synth_circuit,
    "clifford-qfe": _cmd_clifford_qfe,
    "clifford-pattern": _cmd_clifford_pattern,
    "circuit-to-qfe": _cmd_circuit_to_qfe,
    "qft": _cmd_qft,
    "verify": _cmd_verify,
    "random-tableau": _cmd_random_tableau,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Run one invocation and return its exit status."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _VERBS[args.verb](args)
    except FormatError as exc:
        print(f"qformc: format error: {exc}", file=sys.stderr)
        return 2
    except (QformcError, ValueError) as exc:
        print(f"qformc: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
