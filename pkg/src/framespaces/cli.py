"""Command-line surface: one subcommand per operation, stable file formats.

Conventions shared by every subcommand:

* spectra and norm lists are comma-separated; each entry may be a decimal
  (``2.5``) or an exact fraction (``5/2``), converted at parse time,
* results go to stdout, or to ``--output PATH`` when given,
* exit 0 = success, exit 2 = validation/input failure (a structured
  ``{"error": {...}}`` object is printed to stderr), exit 3 = an experiment
  ran but one of its asserted outcomes failed,
* randomized commands take ``--seed`` (default 0) and echo it in their
  output, and identical invocations produce identical results.

Frame files are JSON ``{"format_version": 1, "d": .., "N": ..,
"entries": [[[re, im], .. per column], .. per row]}`` (row-major).
Eigenstep tables are CSV with header ``# d=<d> N=<N>`` and one row per k.
Experiment reports use the JSON schema emitted by
:meth:`framespaces.experiments.ExperimentReport.to_json`.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .admissibility import check_admissible, classify_space, frame_space_dimensions
from .eigensteps import (
    EigenstepTable,
    compute_eigensteps,
    polytope_system,
    sample_tables,
    table_from_csv,
    table_to_csv,
)
from .experiments import run_invariant_suite, run_trichotomy
from .frame_core import Frame, FrameError
from .singularity import is_orthodecomposable, stabilizer_dimension
from .spark import spark
from .synthesis import SynthesisOptions, derive_seed, frame_from_eigensteps
from .torus_action import circle_action

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_EXPERIMENT_FAILED = 3


class CliInputError(ValueError):
    """Malformed flag value or input file (maps to exit code 2)."""


# ---------------------------------------------------------------------------
# parsing helpers


def _parse_scalar(token: str) -> float:
    token = token.strip()
    if not token:
        raise ValueError("empty entry")
    if "/" in token:
        return float(Fraction(token))
    return float(token)


def _parse_vector(text: str, flag: str) -> List[float]:
    try:
        values = [_parse_scalar(tok) for tok in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise CliInputError(f"{flag}: {exc}") from None
    if not values:
        raise CliInputError(f"{flag}: expected a comma-separated list")
    return values


def _parse_index(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise CliInputError(f"--index: expected 'k,j', got {text!r}")
    try:
        k, j = int(parts[0]), int(parts[1])
    except ValueError:
        raise CliInputError(f"--index: entries must be integers, got {text!r}") from None
    return (k, j)


# ---------------------------------------------------------------------------
# frame JSON


def frame_to_json_dict(F: Frame, seed: Optional[int] = None) -> dict:
    entries = [
        [[float(z.real), float(z.imag)] for z in row] for row in np.asarray(F.entries)
    ]
    out = {"format_version": FORMAT_VERSION, "d": F.d, "N": F.N, "entries": entries}
    if seed is not None:
        out["seed"] = seed
    return out


def frame_from_json_dict(data: object, source: str = "<frame>") -> Frame:
    if not isinstance(data, dict):
        raise CliInputError(f"{source}: expected a JSON object")
    version = data.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise CliInputError(f"{source}: unsupported format_version {version!r}")
    for field in ("d", "N", "entries"):
        if field not in data:
            raise CliInputError(f"{source}: missing field {field!r}")
    d, N = data["d"], data["N"]
    if not (isinstance(d, int) and isinstance(N, int) and d >= 1 and N >= 1):
        raise CliInputError(f"{source}: d and N must be positive integers")
    rows = data["entries"]
    if not isinstance(rows, list) or len(rows) != d:
        raise CliInputError(f"{source}: entries must be a list of {d} rows")
    mat = np.zeros((d, N), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != N:
            raise CliInputError(f"{source}: entries[{i}] must be a list of {N} pairs")
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, (int, float)) for x in pair)
            ):
                raise CliInputError(
                    f"{source}: entries[{i}][{j}] must be a [re, im] pair"
                )
            mat[i, j] = complex(pair[0], pair[1])
    return Frame(mat)


def _load_json(path: str) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliInputError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"
        ) from None


def _read_frame(path: str) -> Frame:
    return frame_from_json_dict(_load_json(path), source=path)


def _read_table(path: str) -> EigenstepTable:
    try:
        return table_from_csv(Path(path).read_text())
    except ValueError as exc:
        raise CliInputError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# output helpers


def _emit(text: str, output: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _emit_json(obj: dict, output: Optional[str]) -> None:
    _emit(json.dumps(obj, indent=2), output)


def _table_rows(T: EigenstepTable) -> List[List[float]]:
    return [list(row) for row in T.rows]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_admissible(args: argparse.Namespace) -> int:
    verdict = check_admissible(args.lam, args.r)
    _emit_json(
        {
            "admissible": verdict.admissible,
            "strong": verdict.strong,
            "failing_index": verdict.failing_index,
        },
        args.output,
    )
    return EXIT_OK


def _cmd_classify(args: argparse.Namespace) -> int:
    result = classify_space(args.lam, args.r)
    witness = None
    if result.witness is not None:
        I, J = result.witness
        witness = {"I": list(I), "J": list(J)}
    _emit_json({"kind": result.kind, "witness": witness}, args.output)
    return EXIT_OK


def _cmd_dims(args: argparse.Namespace) -> int:
    report = frame_space_dimensions(args.lam, args.r)
    _emit_json(
        {
            "dim_frame_space": report.dim_frame_space,
            "dim_quotient": report.dim_quotient,
            "dim_polytope": report.dim_polytope,
        },
        args.output,
    )
    return EXIT_OK


def _cmd_eigensteps(args: argparse.Namespace) -> int:
    T = compute_eigensteps(_read_frame(args.frame))
    if args.format == "csv":
        _emit(table_to_csv(T), args.output)
    else:
        d = len(T.rows[-1])
        _emit_json(
            {
                "format_version": FORMAT_VERSION,
                "d": d,
                "N": len(T.rows),
                "rows": _table_rows(T),
            },
            args.output,
        )
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace) -> int:
    T = _read_table(args.table)
    if args.r is not None:
        r = args.r
    else:
        # the table determines the norms: r_k = (sum of row k) - (sum of row k-1)
        sums = [sum(row) for row in T.rows]
        r = [sums[0]] + [sums[k] - sums[k - 1] for k in range(1, len(sums))]
    if args.seed is None:
        opts = SynthesisOptions(mode=args.mode)
        seed_echo = None
    else:
        opts = SynthesisOptions(
            mode=args.mode,
            canonical=False,
            phase_seed=args.seed,
            left_unitary_seed=derive_seed(args.seed, 1),
        )
        seed_echo = args.seed
    F = frame_from_eigensteps(T, r, opts)
    _emit_json(frame_to_json_dict(F, seed=seed_echo), args.output)
    return EXIT_OK


def _numbered_path(path: str, index: int, count: int) -> str:
    if count == 1:
        return path
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{index:03d}{p.suffix}"))


def _cmd_sample(args: argparse.Namespace) -> int:
    P = polytope_system(args.lam, args.r)
    tables = sample_tables(P, args.count, seed=args.seed)
    if args.format == "csv":
        if args.output is None:
            raise CliInputError("--format csv requires --output")
        files = []
        for i, T in enumerate(tables):
            target = _numbered_path(args.output, i, args.count)
            _emit(table_to_csv(T), target)
            files.append(target)
        json.dump({"seed": args.seed, "files": files}, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _emit_json(
            {
                "format_version": FORMAT_VERSION,
                "seed": args.seed,
                "lambda": list(args.lam),
                "r": list(args.r),
                "count": args.count,
                "tables": [_table_rows(T) for T in tables],
            },
            args.output,
        )
    return EXIT_OK


def _cmd_spark(args: argparse.Namespace) -> int:
    report = spark(_read_frame(args.frame), tol=args.tol)
    witness = None if report.witness is None else list(report.witness)
    _emit_json({"spark": report.spark, "witness": witness}, args.output)
    return EXIT_OK


def _cmd_odf(args: argparse.Namespace) -> int:
    F = _read_frame(args.frame)
    partition = is_orthodecomposable(F, tol=args.tol)
    _emit_json(
        {
            "orthodecomposable": partition is not None,
            "partition": None
            if partition is None
            else [list(part) for part in partition.parts],
            "subspace_dims": None
            if partition is None
            else list(partition.subspace_dims),
            "stabilizer_dimension": stabilizer_dimension(F),
        },
        args.output,
    )
    return EXIT_OK


def _cmd_action(args: argparse.Namespace) -> int:
    F = _read_frame(args.frame)
    try:
        t = _parse_scalar(args.angle)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliInputError(f"--angle: {exc}") from None
    G = circle_action(F, args.index, t)
    _emit_json(frame_to_json_dict(G), args.output)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    report = run_invariant_suite(seed=args.seed)
    _emit(report.to_json(), args.output)
    return EXIT_OK if report.all_pass else EXIT_EXPERIMENT_FAILED


def _cmd_montecarlo(args: argparse.Namespace) -> int:
    report = run_trichotomy(args.lam, args.r, samples=args.samples, seed=args.seed)
    _emit(report.to_json(), args.output)
    return EXIT_OK if report.all_pass else EXIT_EXPERIMENT_FAILED


# ---------------------------------------------------------------------------
# parser


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--lambda",
        dest="lam",
        required=True,
        metavar="V1,V2,...",
        help="spectrum, descending; entries may be decimals or fractions like 5/2",
    )
    p.add_argument(
        "--r",
        dest="r",
        required=True,
        metavar="R1,R2,...",
        help="squared column norms; entries may be decimals or fractions",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framespaces",
        description="Frame spaces with prescribed spectrum and column norms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--output", metavar="PATH", help="write result here instead of stdout")
        return p

    p = command("admissible", _cmd_admissible, "majorization check for (lambda, r)")
    _add_data_flags(p)

    p = command("classify", _cmd_classify, "Empty / SingularVariety / SmoothManifold")
    _add_data_flags(p)

    p = command("dims", _cmd_dims, "dimension formulas for the space and quotient")
    _add_data_flags(p)

    p = command("eigensteps", _cmd_eigensteps, "eigenstep table of a frame file")
    p.add_argument("--frame", required=True, metavar="PATH", help="frame JSON file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = command("synth", _cmd_synth, "synthesize a frame from an eigenstep table")
    p.add_argument("--table", required=True, metavar="PATH", help="eigenstep CSV file")
    p.add_argument(
        "--r",
        dest="r",
        default=None,
        metavar="R1,R2,...",
        help="squared column norms (default: derived from the table's row sums)",
    )
    p.add_argument("--mode", choices=("strict", "boundary", "perturb"), default="strict")
    p.add_argument(
        "--seed",
        type=int,
        default=None,
        help="randomize column phases/basis with this seed (default: canonical, deterministic)",
    )

    p = command("sample", _cmd_sample, "sample eigenstep tables from the polytope")
    _add_data_flags(p)
    p.add_argument("--count", type=int, default=1, help="number of tables (default 1)")
    p.add_argument("--seed", type=int, default=0, help="sampler seed (default 0)")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = command("spark", _cmd_spark, "spark and a smallest dependent witness")
    p.add_argument("--frame", required=True, metavar="PATH", help="frame JSON file")
    p.add_argument("--tol", type=float, default=1e-9, help="dependence tolerance")

    p = command("odf", _cmd_odf, "orthodecomposability and stabilizer dimension")
    p.add_argument("--frame", required=True, metavar="PATH", help="frame JSON file")
    p.add_argument("--tol", type=float, default=1e-8, help="overlap-graph edge tolerance")

    p = command("action", _cmd_action, "apply one circle action to a frame")
    p.add_argument("--frame", required=True, metavar="PATH", help="frame JSON file")
    p.add_argument(
        "--index",
        required=True,
        type=_parse_index,
        metavar="K,J",
        help="action index (k, j), 1-based",
    )
    p.add_argument(
        "--angle",
        required=True,
        metavar="T",
        help="rotation angle in radians; decimals or fractions",
    )

    p = command("verify", _cmd_verify, "run the full invariant suite")
    p.add_argument("--seed", type=int, default=0, help="suite seed (default 0)")

    p = command("montecarlo", _cmd_montecarlo, "trichotomy experiment for (lambda, r)")
    _add_data_flags(p)
    p.add_argument("--samples", type=int, default=1000, help="sample count (default 1000)")
    p.add_argument("--seed", type=int, default=0, help="experiment seed (default 0)")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "lam", None) is not None and isinstance(args.lam, str):
            args.lam = _parse_vector(args.lam, "--lambda")
        if getattr(args, "r", None) is not None and isinstance(args.r, str):
            args.r = _parse_vector(args.r, "--r")
        return args.func(args)
    except CliInputError as exc:
        _print_error(exc)
        return EXIT_INVALID
    except FrameError as exc:
        _print_error(exc)
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        _print_error(exc)
        return EXIT_INVALID


def _print_error(exc: Exception) -> None:
    json.dump(
        {"error": {"type": type(exc).__name__, "message": str(exc)}},
        sys.stderr,
        indent=2,
    )
    sys.stderr.write("\n")


if __name__ == "__main__":
    sys.exit(main())
