"""Command-line front end: phase synthesis, response curves, algorithm demos.

Output files are byte-deterministic for a fixed invocation and seed: JSON is
emitted with sorted keys, CSV uses 17 significant digits with LF endings,
and the SVG emitter depends only on its input curve.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import families
from .algorithms import (
    hamiltonian_simulation,
    hamsim_query_count,
    matrix_inversion,
    order_finding_demo,
    phase_estimation_record,
    pe_epsilon_for,
    eigenvalue_threshold,
    qsvt_search,
)
from .block_encoding import (
    encoding_from_json,
    encoding_to_json,
    matrix_from_json,
    matrix_to_json,
)
from .errors import DomainError, EmptyCurve, QsvtSimError
from .phase_solver import SolverOptions, residual
from .poly_approx import poly_to_json
from .qsp_core import (
    phase_sequence_from_json,
    phase_sequence_to_json,
    response_curve,
)
from .qsvt_engine import QsvtProgram, transformed_block

OUTPUT_DIR_ENV = "QSVTSIM_OUTPUT_DIR"


def _out_path(path: str) -> str:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _write_text(path: str, text: str):
    with open(_out_path(path), "w", newline="\n") as fh:
        fh.write(text)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def curve_csv(curve) -> str:
    lines = ["a,re,im,abs2"]
    for a, val in curve:
        lines.append(
            f"{_fmt(a)},{_fmt(val.real)},{_fmt(val.imag)},{_fmt(abs(val) ** 2)}"
        )
    return "\n".join(lines) + "\n"


def emit_svg(curve, channels=("re",), width: int = 640, height: int = 400) -> str:
    """Standalone SVG with axes and one polyline per requested channel."""
    if not curve:
        raise EmptyCurve("cannot render an empty curve")
    extract = {
        "re": lambda v: v.real,
        "im": lambda v: v.imag,
        "abs2": lambda v: min(abs(v) ** 2, 1.0 + 1e-9),
    }
    colors = {"re": "#1f6fb2", "im": "#b2471f", "abs2": "#2e8b57"}
    margin = 40.0
    xs = [a for a, _ in curve]
    x_lo, x_hi = min(xs), max(xs)
    x_span = (x_hi - x_lo) or 1.0
    y_lo, y_hi = -1.05, 1.05

    def sx(x):
        return margin + (x - x_lo) / x_span * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{sx(x_lo):.2f}" y1="{sy(0):.2f}" x2="{sx(x_hi):.2f}" y2="{sy(0):.2f}" '
        'stroke="#888" stroke-width="1"/>',
        f'<line x1="{sx(min(0.0, x_hi)):.2f}" y1="{sy(y_lo):.2f}" '
        f'x2="{sx(min(0.0, x_hi)):.2f}" y2="{sy(y_hi):.2f}" stroke="#888" stroke-width="1"/>',
    ]
    for chan in channels:
        pts = " ".join(
            f"{sx(a):.3f},{sy(extract[chan](v)):.3f}" for a, v in curve
        )
        parts.append(
            f'<polyline fill="none" stroke="{colors[chan]}" stroke-width="1.5" '
            f'points="{pts}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _parse_args_kv(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item:
            continue
        key, _, value = item.partition("=")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            out[key.strip()] = value.strip()
    return out


def _grid(npts: int) -> np.ndarray:
    return np.linspace(-1.0, 1.0, npts)


def _load_matrix(path: str) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(fh.read())


def _emit_record(record, out: str | None):
    text = record.to_json()
    if out:
        _write_text(out, text + "\n")
    print(text)


def _cmd_phases(args) -> int:
    kv = _parse_args_kv(args.args)
    options = SolverOptions(residual_tol=args.residual_tol, rng_seed=args.seed)
    seq = families.family_phases(args.family, kv, options)
    text = phase_sequence_to_json(seq)
    if args.json:
        _write_text(args.json, text + "\n")
    print(text)
    if args.emit_response:
        curve = response_curve(seq, _grid(args.npts))
        _write_text(args.emit_response, curve_csv(curve))
    return 0


def _cmd_poly(args) -> int:
    kv = _parse_args_kv(args.args)
    poly = families.family_target(args.family, kv)
    text = poly_to_json(poly)
    if args.json:
        _write_text(args.json, text + "\n")
    print(text)
    if args.csv:
        grid = _grid(args.npts)
        vals = poly(grid)
        lines = ["a,value"] + [f"{_fmt(a)},{_fmt(v)}" for a, v in zip(grid, vals)]
        _write_text(args.csv, "\n".join(lines) + "\n")
    return 0


def _cmd_response(args) -> int:
    with open(args.phases) as fh:
        seq = phase_sequence_from_json(fh.read())
    curve = response_curve(seq, _grid(args.npts))
    if args.csv:
        _write_text(args.csv, curve_csv(curve))
    if args.svg:
        channels = tuple(args.channels.split(","))
        _write_text(args.svg, emit_svg(curve, channels))
    if not args.csv and not args.svg:
        print(curve_csv(curve), end="")
    return 0


def _cmd_qsvt(args) -> int:
    with open(args.encoding) as fh:
        encoding = encoding_from_json(fh.read())
    with open(args.phases) as fh:
        seq = phase_sequence_from_json(fh.read())
    block = transformed_block(QsvtProgram(encoding, seq))
    text = matrix_to_json(block)
    if args.emit:
        _write_text(args.emit, text + "\n")
    print(text)
    return 0


def _require_seed(args, parser_name: str):
    if getattr(args, "exact", False):
        return 0
    if args.seed is None:
        raise DomainError(f"{parser_name}: --seed is mandatory in sampled mode")
    return args.seed


def _cmd_search(args) -> int:
    seed = _require_seed(args, "search")
    record = qsvt_search(
        args.n_qubits, args.marked, args.delta, args.transition, seed, args.exact
    )
    _emit_record(record, args.emit)
    return 0


def _cmd_threshold(args) -> int:
    seed = _require_seed(args, "threshold")
    h = _load_matrix(args.matrix)
    psi = _load_matrix(args.psi).ravel()
    record = eigenvalue_threshold(
        h, args.alpha, args.lambda_th, args.delta_lambda,
        args.zeta, args.delta, psi, seed, args.exact,
    )
    _emit_record(record, args.emit)
    return 0


def _cmd_qpe(args) -> int:
    if args.phi is not None:
        u = np.array([[np.exp(2j * np.pi * args.phi)]])
        vec = np.array([1.0 + 0j])
    else:
        u = _load_matrix(args.matrix)
        vec = _load_matrix(args.eigvec).ravel()
    seed = _require_seed(args, "qpe")
    epsilon = args.epsilon if args.epsilon is not None else pe_epsilon_for(args.delta, args.n)
    record = phase_estimation_record(
        u, vec, args.n, epsilon, args.transition, seed, args.exact
    )
    print(f"theta={record.decision.value:.10g}")
    _emit_record(record, args.emit)
    return 0


def _cmd_factor(args) -> int:
    seed = _require_seed(args, "factor")
    record = order_finding_demo(args.x, args.modulus, args.delta, seed)
    print(f"order={record.decision}")
    _emit_record(record, args.emit)
    return 0


def _cmd_hamsim(args) -> int:
    h = _load_matrix(args.matrix)
    enc = hamiltonian_simulation(h, args.alpha, args.t, args.epsilon)
    print(
        json.dumps(
            {
                "queries": hamsim_query_count(args.alpha, args.t, args.epsilon),
                "alpha": enc.alpha,
                "dim": enc.dim,
            },
            sort_keys=True,
        )
    )
    if args.emit:
        _write_text(args.emit, encoding_to_json(enc) + "\n")
    return 0


def _cmd_invert(args) -> int:
    a = _load_matrix(args.matrix)
    enc = matrix_inversion(a, args.kappa, args.epsilon)
    print(json.dumps({"alpha": enc.alpha, "dim": enc.dim}, sort_keys=True))
    if args.emit:
        _write_text(args.emit, encoding_to_json(enc) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsvtsim",
        description="QSP phase synthesis and QSVT algorithm simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phases", help="synthesize phases for a named family")
    p.add_argument(
        "--family",
        required=True,
        help="one of: " + ", ".join(families.FAMILY_NAMES) + "; see the poly command for arguments",
    )
    p.add_argument("--args", default="", help="comma-separated key=value family arguments")
    p.add_argument("--emit-response", metavar="CSV")
    p.add_argument("--json", metavar="FILE")
    p.add_argument("--npts", type=int, default=400)
    p.add_argument("--residual-tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=1205)
    p.set_defaults(func=_cmd_phases)

    p = sub.add_parser("poly", help="emit a family target polynomial")
    p.add_argument("--family", required=True)
    p.add_argument("--args", default="")
    p.add_argument("--csv", metavar="FILE")
    p.add_argument("--json", metavar="FILE")
    p.add_argument("--npts", type=int, default=400)
    p.set_defaults(func=_cmd_poly)

    p = sub.add_parser("response", help="sample the response of stored phases")
    p.add_argument("--phases", required=True)
    p.add_argument("--npts", type=int, default=400)
    p.add_argument("--csv", metavar="FILE")
    p.add_argument("--svg", metavar="FILE")
    p.add_argument("--channels", default="re")
    p.set_defaults(func=_cmd_response)

    p = sub.add_parser("qsvt", help="apply stored phases to a stored encoding")
    p.add_argument("--encoding", required=True)
    p.add_argument("--phases", required=True)
    p.add_argument("--emit", metavar="FILE")
    p.set_defaults(func=_cmd_qsvt)

    p = sub.add_parser("search", help="unstructured search demo")
    p.add_argument("--n-qubits", type=int, required=True)
    p.add_argument("--marked", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--transition", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--emit", metavar="FILE")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("threshold", help="eigenvalue threshold decision demo")
    p.add_argument("--matrix", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--lambda-th", type=float, required=True)
    p.add_argument("--delta-lambda", type=float, required=True)
    p.add_argument("--zeta", type=float, default=2**-0.5)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--emit", metavar="FILE")
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("qpe", help="phase estimation demo")
    p.add_argument("--phi", type=float, default=None, help="eigenphase of a 1x1 oracle")
    p.add_argument("--matrix", help="unitary JSON (alternative to --phi)")
    p.add_argument("--eigvec", help="eigenvector JSON for --matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--transition", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--emit", metavar="FILE")
    p.set_defaults(func=_cmd_qpe)

    p = sub.add_parser("factor", help="order finding demo")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--emit", metavar="FILE")
    p.set_defaults(func=_cmd_factor)

    p = sub.add_parser("hamsim", help="Hamiltonian evolution encoding")
    p.add_argument("--matrix", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--emit", metavar="FILE")
    p.set_defaults(func=_cmd_hamsim)

    p = sub.add_parser("invert", help="matrix inversion encoding")
    p.add_argument("--matrix", required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--emit", metavar="FILE")
    p.set_defaults(func=_cmd_invert)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QsvtSimError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
