"""Command-line interface.

    matchfactor validate   --input FILE
    matchfactor factor     --input FILE [--star]
    matchfactor classify   --input FILE
    matchfactor generate   --kind KIND --n N [--seed S] [--scale C]
    matchfactor decompose  --input FILE [--max-terms K]
    matchfactor trajectory --input FILE [--tmax T]
    matchfactor oracle     --n {2,3} [--resolution R] [--samples S] [--seed S]

Every subcommand accepts --json, --format {dense,csv}, --sum-tol, --zero-tol
and --class-log-tol.  Exit codes: 0 success, 1 usage error, 2 parse or
validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import re
import sys
from pathlib import Path
from typing import Any, Optional

from . import analysis, bvn, factor, genmat
from .errors import InvalidInputError, NumericalError
from .matcore import DenseMatrix, ToleranceConfig, classify

SCHEMA_VERSION = "1.0"

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


class UsageError(Exception):
    pass


class ParseError(InvalidInputError):
    pass


# ---------------------------------------------------------------------------
# matrix files


def _parse_token(tok: str, line_no: int) -> float:
    if _NUMBER.fullmatch(tok):
        return float(tok)
    if tok.lower().lstrip("+-") in ("nan", "inf", "infinity"):
        raise ParseError(f"line {line_no}: non-finite value {tok!r}")
    raise ParseError(f"line {line_no}: non-numeric token {tok!r}")


def _rows_to_matrix(rows: list[tuple[int, list[str]]]) -> DenseMatrix:
    if not rows:
        raise ParseError("empty matrix file")
    n = len(rows)
    values = []
    for line_no, toks in rows:
        if len(toks) != n:
            raise ParseError(
                f"line {line_no}: ragged row with {len(toks)} values, expected {n}"
            )
        values.append([_parse_token(t, line_no) for t in toks])
    return DenseMatrix(values)


def parse_dense_text(text: str) -> DenseMatrix:
    """Whitespace-separated rows; blank lines and '#' comments are skipped."""
    rows = []
    for line_no, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        rows.append((line_no, s.split()))
    return _rows_to_matrix(rows)


def parse_csv(text: str) -> DenseMatrix:
    """Comma-separated rows, no header."""
    rows = []
    for line_no, record in enumerate(csv.reader(io.StringIO(text)), 1):
        if not record or all(not f.strip() for f in record):
            continue
        rows.append((line_no, [f.strip() for f in record]))
    return _rows_to_matrix(rows)


def parse_matrix(path, fmt: Optional[str] = None) -> DenseMatrix:
    """Read a matrix file.  ``fmt`` is 'dense' or 'csv'; default by extension."""
    path = Path(path)
    if fmt is None:
        fmt = "csv" if path.suffix.lower() == ".csv" else "dense"
    try:
        text = path.read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if fmt == "csv":
        return parse_csv(text)
    if fmt == "dense":
        return parse_dense_text(text)
    raise UsageError(f"unknown format {fmt!r}")


def fmt_real(x: float) -> str:
    """17 significant digits: enough to round-trip any binary64 value."""
    return format(float(x), ".17g")


def format_dense(m: DenseMatrix) -> str:
    return "".join(" ".join(fmt_real(x) for x in row) + "\n" for row in m.rows())


def matrix_digest(m: DenseMatrix) -> str:
    """SHA-256 of the canonical text form, independent of the input format."""
    canon = f"{m.n}\n" + format_dense(m)
    return hashlib.sha256(canon.encode("ascii")).hexdigest()


# ---------------------------------------------------------------------------
# JSON


def dump_json(obj: Any) -> str:
    """Deterministic JSON with every float written at 17 significant digits."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialise {obj!r}")
        return fmt_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = (json.dumps(str(k)) + ": " + dump_json(v) for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dump_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def envelope(command: str, digest: str, payload: dict) -> dict:
    return {
        "command": command,
        "schema_version": SCHEMA_VERSION,
        "input_digest": digest,
        "payload": payload,
    }


def _params_digest(params: dict) -> str:
    return hashlib.sha256(dump_json(params).encode("ascii")).hexdigest()


# ---------------------------------------------------------------------------
# payloads


def classification_payload(m: DenseMatrix, tol: ToleranceConfig) -> dict:
    r = classify(m, tol)
    return {"n": m.n, **{k: getattr(r, k) for k in r.__dataclass_fields__}}


def profile_payload(p: factor.MatchingProfile) -> dict:
    out = {
        "n": p.n,
        "variant": p.variant.value,
        "lambdas": list(p.lambdas),
        "log_lambdas": list(p.log_lambdas),
        "log_m": p.log_m,
    }
    if not p.underflows:
        out["m_linear"] = p.m_linear
    out["log_lower_bound"] = p.log_lower_bound
    out["log_upper_bound"] = p.log_upper_bound
    if p.variant is factor.Variant.PLAIN:
        out["proximity"] = analysis.permutation_proximity(p)
    return out


def extreme_payload(n: int, e: factor.ExtremeClass) -> dict:
    return {
        "n": n,
        "kind": e.kind.value,
        "permutation": list(e.permutation) if e.permutation is not None else None,
        "log_m": e.log_m,
    }


def decomposition_payload(d: bvn.BvnDecomposition) -> dict:
    return {
        "n": d.n,
        "term_count": len(d.terms),
        "terms": [{"weight": w, "permutation": list(p.map)} for w, p in d.terms],
        "residual_mass": d.residual_mass,
    }


def trajectory_payload(tr: analysis.TrajectoryRecord) -> dict:
    return {
        "n": tr.n,
        "converged": tr.converged,
        "samples": [{"t": t, "log_m": lm} for t, lm in tr.samples],
    }


def oracle_payload(o: analysis.OracleResult) -> dict:
    return {k: getattr(o, k) for k in o.__dataclass_fields__}


# ---------------------------------------------------------------------------
# text rendering


def _text_value(v: Any) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower() if isinstance(v, bool) else "none"
    if isinstance(v, float):
        return fmt_real(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_text_value(x) for x in v)
    return str(v)


def render_text(command: str, payload: dict) -> str:
    if command == "generate":
        return format_dense(DenseMatrix(payload["matrix"]))
    if command == "trajectory":
        lines = ["t,log_m"] + [f"{s['t']},{fmt_real(s['log_m'])}" for s in payload["samples"]]
        return "\n".join(lines) + "\n"
    if command == "decompose":
        lines = [f"n: {payload['n']}", f"term_count: {payload['term_count']}"]
        lines += [
            f"term {i}: weight {fmt_real(t['weight'])} permutation {_text_value(t['permutation'])}"
            for i, t in enumerate(payload["terms"])
        ]
        lines.append(f"residual_mass: {fmt_real(payload['residual_mass'])}")
        return "\n".join(lines) + "\n"
    return "".join(f"{k}: {_text_value(v)}\n" for k, v in payload.items())


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_float(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}")
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive: {s!r}")
    return v


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {s!r}")
    return v


def _seed(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"seed must be non-negative: {s!r}")
    return v


GENERATE_KINDS = ("permutation", "uniform", "bistochastic", "star-permutation", "star-uniform", "star-positive")


def build_parser() -> argparse.ArgumentParser:
    shared = _Parser(add_help=False)
    shared.add_argument("--input", type=Path, help="matrix file")
    shared.add_argument("--format", choices=("dense", "csv"), help="default: by file extension")
    shared.add_argument("--json", action="store_true", help="emit the JSON report envelope")
    shared.add_argument("--sum-tol", type=_positive_float, default=ToleranceConfig.sum_tol)
    shared.add_argument("--zero-tol", type=_positive_float, default=ToleranceConfig.zero_tol)
    shared.add_argument("--class-log-tol", type=_positive_float, default=ToleranceConfig.class_log_tol)

    parser = _Parser(prog="matchfactor", description="Matching factor of bistochastic matrices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[shared], help="class membership report")
    p = sub.add_parser("factor", parents=[shared], help="per-index factors and log M")
    p.add_argument("--star", action="store_true", help="use the normalised *-variant")
    sub.add_parser("classify", parents=[shared], help="permutation / uniform / interior")

    p = sub.add_parser("generate", parents=[shared], help="emit a matrix of the given class")
    p.add_argument("--kind", choices=GENERATE_KINDS, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--scale", type=_positive_float, default=1.0,
                   help="entry value for star-uniform, multiplier for other star kinds")

    p = sub.add_parser("decompose", parents=[shared], help="Birkhoff-von Neumann decomposition")
    p.add_argument("--max-terms", type=_positive_int)

    p = sub.add_parser("trajectory", parents=[shared], help="log M of B^t for t = 1..tmax")
    p.add_argument("--tmax", type=_positive_int, default=100)
    p.add_argument("--limit-tol", type=_positive_float, default=1e-3)

    p = sub.add_parser("oracle", parents=[shared], help="brute-force scan for n = 2 or 3")
    p.add_argument("--n", type=int, choices=(2, 3), required=True)
    p.add_argument("--resolution", type=_positive_int, default=101)
    p.add_argument("--samples", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    return parser


def _generate(args) -> dict:
    kind, n, seed, c = args.kind, args.n, args.seed, args.scale
    if kind in ("permutation", "uniform", "bistochastic") and c != 1.0:
        raise UsageError(f"--scale does not apply to kind {kind!r}")
    if kind == "permutation":
        m = genmat.permutation_matrix(genmat.random_permutation(n, seed))
    elif kind == "uniform":
        m = genmat.uniform_matrix(n)
    elif kind == "bistochastic":
        m = genmat.random_bistochastic(n, seed)
    elif kind == "star-permutation":
        m = genmat.scale(genmat.star_permutation_random(n, seed), c)
    elif kind == "star-uniform":
        m = genmat.star_uniform(n, c)
    else:
        m = genmat.scale(genmat.random_star_positive(n, seed), c)
    return {"kind": kind, "n": n, "seed": seed, "scale": c, "matrix": m.rows()}


def run(args) -> tuple[str, dict]:
    """Execute a parsed command; returns (input digest, payload)."""
    tol = ToleranceConfig(args.sum_tol, args.zero_tol, args.class_log_tol)
    cmd = args.command

    if cmd == "generate":
        payload = _generate(args)
        params = {k: payload[k] for k in ("kind", "n", "seed", "scale")}
        return _params_digest({"command": cmd, **params}), payload
    if cmd == "oracle":
        params = {"command": cmd, "n": args.n, "resolution": args.resolution,
                  "samples": args.samples, "seed": args.seed}
        result = analysis.oracle_grid_scan(args.n, args.resolution, args.seed, args.samples)
        return _params_digest(params), oracle_payload(result)

    if args.input is None:
        raise UsageError(f"{cmd} requires --input")
    m = parse_matrix(args.input, args.format)
    digest = matrix_digest(m)

    if cmd == "validate":
        return digest, classification_payload(m, tol)
    if cmd == "factor":
        prof = factor.star_matching_factor(m) if args.star else factor.matching_factor(m)
        return digest, profile_payload(prof)
    if cmd == "classify":
        return digest, extreme_payload(m.n, factor.classify_extreme(m, tol))
    if cmd == "decompose":
        return digest, decomposition_payload(bvn.bvn_decompose(m, tol, args.max_terms))
    if cmd == "trajectory":
        tr = analysis.power_trajectory(m, args.tmax, tol, args.limit_tol)
        return digest, trajectory_payload(tr)
    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        digest, payload = run(args)
    except SystemExit as exc:
        # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except InvalidInputError as exc:
        print(f"invalid input: {exc}", file=stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC

    if args.json:
        stdout.write(dump_json(envelope(args.command, digest, payload)) + "\n")
    else:
        stdout.write(render_text(args.command, payload))
    return EXIT_OK
