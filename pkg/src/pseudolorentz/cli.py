"""Command-line interface: JSON documents in, JSON documents out.

Exit codes: 0 success, 1 verification found failing checks, 2 usage or parse
error, 3 domain error (non-Lorentz matrix, non-SO block), 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import axioms, bigyro, lorentz
from .lorentz import ParamTriple, Signature
from .matcore import ConsistencyError, DomainError, ShapeError, frob, random_param, random_so, sample_param, sample_so

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4


class ParseError(ValueError):
    """A document on the command line is malformed."""


class CliIOError(OSError):
    """Reading or writing a document failed."""


# ---------------------------------------------------------------------------
# documents

def matrix_to_doc(a) -> dict:
    a = np.asarray(a, dtype=np.float64)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": [float(v) for v in a.reshape(-1)]}


def _int_field(doc, key, where):
    v = doc.get(key) if isinstance(doc, dict) else None
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ParseError(f"{where}: field {key!r} must be a positive integer")
    return v


def doc_to_matrix(doc, where="matrix") -> np.ndarray:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object with rows, cols, data")
    rows = _int_field(doc, "rows", where)
    cols = _int_field(doc, "cols", where)
    data = doc.get("data")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ParseError(f"{where}: data must be a list of {rows * cols} numbers")
    if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in data):
        raise ParseError(f"{where}: data entries must be numbers")
    if not all(math.isfinite(v) for v in data):
        raise ParseError(f"{where}: data entries must be finite")
    return np.asarray(data, dtype=np.float64).reshape(rows, cols)


def triple_to_doc(t: ParamTriple) -> dict:
    n, m = np.shape(t.p)
    return {"m": m, "n": n, "p": matrix_to_doc(t.p), "on": matrix_to_doc(t.on), "om": matrix_to_doc(t.om)}


def doc_to_triple(doc, where="triple") -> ParamTriple:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object with m, n, p, on, om")
    m = _int_field(doc, "m", where)
    n = _int_field(doc, "n", where)
    p = doc_to_matrix(doc.get("p"), f"{where}.p")
    on = doc_to_matrix(doc.get("on"), f"{where}.on")
    om = doc_to_matrix(doc.get("om"), f"{where}.om")
    for name, mat, shape in (("p", p, (n, m)), ("on", on, (n, n)), ("om", om, (m, m))):
        if mat.shape != shape:
            raise ParseError(f"{where}.{name}: expected {shape[0]}x{shape[1]}, got {mat.shape[0]}x{mat.shape[1]}")
    return ParamTriple(p, on, om)


def _read_text(path: str, stdin) -> str:
    if path == "-":
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliIOError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_json(path: str, stdin):
    text = _read_text(path, stdin)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _emit(doc, out):
    out.write(json.dumps(doc) + "\n")


def _parse_sig(text: str) -> Signature:
    try:
        return Signature.parse(text)
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _parse_sig_list(text: str) -> list[Signature]:
    parts = [s for s in text.replace(";", ",").split(",") if s.strip()]
    return [_parse_sig(s) for s in parts]


def _use_color(stream) -> bool:
    return "NO_COLOR" not in os.environ and hasattr(stream, "isatty") and stream.isatty()


def _paint(text: str, code: str, stream) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if _use_color(stream) else text


# ---------------------------------------------------------------------------
# commands

def cmd_compose(args, stdin, out, err) -> int:
    if args.first == "-" and args.second == "-":
        raise ParseError("only one document may come from standard input")
    t1 = doc_to_triple(_load_json(args.first, stdin), "first")
    t2 = doc_to_triple(_load_json(args.second, stdin), "second")
    if t1.sig != t2.sig:
        raise ParseError(f"signatures differ: {t1.sig} vs {t2.sig}")
    _emit(triple_to_doc(lorentz.product(t1, t2)), out)
    return EXIT_OK


def cmd_assemble(args, stdin, out, err) -> int:
    t = doc_to_triple(_load_json(args.triple, stdin))
    _emit(matrix_to_doc(lorentz.assemble(t)), out)
    return EXIT_OK


def cmd_decompose(args, stdin, out, err) -> int:
    sig = args.sig
    mat = doc_to_matrix(_load_json(args.matrix, stdin))
    if mat.shape != (sig.dim, sig.dim):
        raise ParseError(f"matrix is {mat.shape[0]}x{mat.shape[1]}, signature {sig} needs {sig.dim}x{sig.dim}")
    check = lorentz.is_lorentz(mat, sig)
    if not check:
        raise DomainError(
            "matrix is not a Lorentz transformation: "
            + ", ".join(f"{k}={v:.3e}" for k, v in check.as_dict().items())
        )
    if args.polar:
        t = lorentz.polar_decompose(mat, sig)
        rebuilt = lorentz.assemble_polar(t, sig)
    else:
        rec = lorentz.recognize_with_report(mat, sig)
        t = rec.triple
        rebuilt = lorentz.assemble(t, sig)
        if rec.reorthonormalized:
            err.write("note: rotation blocks were re-orthonormalized\n")
    err.write(f"reassembly residual: {float(frob(rebuilt - mat)):.3e}\n")
    _emit(triple_to_doc(t), out)
    return EXIT_OK


def cmd_verify(args, stdin, out, err) -> int:
    reports = axioms.run_suite(args.sigs, trials=args.trials, seed=args.seed, scale=args.scale, workers=args.workers)
    if args.json:
        text = axioms.reports_to_json(reports) + "\n"
        if args.json == "-":
            out.write(text)
        else:
            try:
                with open(args.json, "w", encoding="utf-8") as fh:
                    fh.write(text)
            except OSError as exc:
                raise CliIOError(f"cannot write {args.json}: {exc.strerror or exc}") from exc
    log = err if args.json == "-" else out
    for r in reports:
        if args.quiet and r.passed:
            continue
        tag = _paint("PASS", "32", log) if r.passed else _paint("FAIL", "31", log)
        log.write(f"{tag} {r.id:40s} {str(r.sig):5s} max={r.max_residual:.2e} mean={r.mean_residual:.2e}\n")
    failed = sum(not r.passed for r in reports)
    log.write(f"{len(reports) - failed}/{len(reports)} checks passed\n")
    return EXIT_OK if failed == 0 else EXIT_FAILED


def cmd_sample(args, stdin, out, err) -> int:
    if args.kind == "rotation":
        if args.k is None:
            raise ParseError("--kind rotation needs --k")
        if args.k < 1:
            raise ParseError("--k must be positive")
        _emit(matrix_to_doc(random_so(args.k, args.seed)), out)
        return EXIT_OK
    if args.sig is None:
        raise ParseError(f"--kind {args.kind} needs --sig MxN")
    sig = args.sig
    if args.kind == "param":
        _emit(matrix_to_doc(random_param(sig.n, sig.m, args.scale, args.seed)), out)
    else:
        rng = np.random.default_rng(args.seed)
        t = ParamTriple(sample_param(rng, sig.n, sig.m, args.scale), sample_so(rng, sig.n), sample_so(rng, sig.m))
        _emit(triple_to_doc(t), out)
    return EXIT_OK


def cmd_gyr(args, stdin, out, err) -> int:
    if sum(x == "-" for x in (args.p1, args.p2, args.x)) > 1:
        raise ParseError("only one document may come from standard input")
    p1 = doc_to_matrix(_load_json(args.p1, stdin), "p1")
    p2 = doc_to_matrix(_load_json(args.p2, stdin), "p2")
    x = doc_to_matrix(_load_json(args.x, stdin), "x")
    if not (p1.shape == p2.shape == x.shape):
        raise ParseError(f"shapes differ: p1 {p1.shape}, p2 {p2.shape}, x {x.shape}")
    _emit(matrix_to_doc(bigyro.gyr(p1, p2, x)), out)
    if args.verbose:
        g = bigyro.bigyration(p1, p2)
        err.write(f"lgyr[p1,p2]: {json.dumps(matrix_to_doc(g.lg))}\n")
        err.write(f"rgyr[p2,p1]: {json.dumps(matrix_to_doc(bigyro.rgyr(p2, p1)))}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pseudolorentz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compose", help="product of two parameter triples")
    p.add_argument("first", help="TripleDoc path or - for stdin")
    p.add_argument("second", help="TripleDoc path or - for stdin")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("assemble", help="matrix of a parameter triple")
    p.add_argument("triple", help="TripleDoc path or -")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("decompose", help="parameter triple of a Lorentz matrix")
    p.add_argument("matrix", help="MatrixDoc path or -")
    p.add_argument("--sig", type=_parse_sig, required=True, help="signature MxN")
    p.add_argument("--polar", action="store_true", help="return the polar-convention triple")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="run the identity suite")
    p.add_argument("--sigs", type=_parse_sig_list, default=list(axioms.DEFAULT_SIGS), help="comma-separated MxN list")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=2.0)
    p.add_argument("--json", metavar="PATH", help="write the JSON report here (- for stdout)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--quiet", action="store_true", help="list failing checks only")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="random parameter, rotation or triple")
    p.add_argument("--kind", choices=("param", "rotation", "triple"), required=True)
    p.add_argument("--sig", type=_parse_sig, help="signature MxN (param, triple)")
    p.add_argument("--k", type=int, help="rotation size (rotation)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=2.0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("gyr", help="apply gyr[p1, p2] to x")
    p.add_argument("p1")
    p.add_argument("p2")
    p.add_argument("x")
    p.add_argument("--verbose", action="store_true", help="also print the gyration blocks to stderr")
    p.set_defaults(func=cmd_gyr)
    return parser


def main(argv: Sequence[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "trials", 1) < 1:
        err.write("error: --trials must be at least 1\n")
        return EXIT_USAGE
    if getattr(args, "scale", 1.0) <= 0 or (getattr(args, "seed", 0) < 0):
        err.write("error: --scale must be positive and --seed non-negative\n")
        return EXIT_USAGE
    try:
        return args.func(args, stdin, out, err)
    except (ParseError, ShapeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (DomainError, ConsistencyError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except CliIOError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
