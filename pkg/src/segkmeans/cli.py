"""Command line entry point: ``segkmeans INPUT --k K [options]``.

Exit codes: 0 on success, 2 for invalid input or configuration, 3 when a
resource limit is hit.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import _kernels
from .coreset import DEFAULT_CORESET_CONSTANT
from .errors import InvalidInputError, ResourceLimitError
from .io import coreset_to_json, dumps_result, emit_svg, load_input
from .optimizer import OptimizerConfig
from .pipeline import PipelineConfig, repetition_coreset, run_pipeline_arrays

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RESOURCE = 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="segkmeans",
        description="k-means clustering of planar segments or polylines under the squared Hausdorff distance.",
    )
    p.add_argument("input", help="CSV (x1,y1,x2,y2[,w]) or JSON input file")
    p.add_argument("--k", type=int, required=True, help="number of centers")
    p.add_argument("--epsilon", type=float, default=0.1, help="target relative error, in (0, 1/2)")
    p.add_argument("--delta", type=float, default=0.25, help="failure probability, in (0, 1/2)")
    p.add_argument("--ell", type=int, default=1, help="segments per polyline (1 for plain segments)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default=None, help="input format (default: from suffix)")
    p.add_argument("--output", default=None, help="result JSON path (default: stdout)")
    p.add_argument("--svg", default=None, help="also write an SVG plot here")
    p.add_argument("--coreset-constant", type=float, default=DEFAULT_CORESET_CONSTANT)
    p.add_argument("--restarts", type=int, default=OptimizerConfig.restarts)
    p.add_argument("--max-iters", type=int, default=OptimizerConfig.max_iters)
    p.add_argument("--repetitions", type=int, default=None, help="default: ceil(log2(1/delta))")
    p.add_argument("--coreset-only", action="store_true", help="write the coreset of the first repetition and stop")
    p.add_argument("--trace", default=None, help="write optimizer iterations as JSON lines to this path")
    return p


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def run(args: argparse.Namespace) -> int:
    if args.seed < 0 or args.seed >= 2**64:
        raise InvalidInputError("seed must be a 64-bit unsigned integer")
    cfg = PipelineConfig(
        k=args.k, epsilon=args.epsilon, delta=args.delta, ell=args.ell, seed=args.seed,
        coreset_constant=args.coreset_constant,
        optimizer=OptimizerConfig(restarts=args.restarts, max_iters=args.max_iters),
        repetitions=args.repetitions,
    )
    X, w = load_input(args.input, args.format, args.ell)

    if args.coreset_only:
        Xc = _kernels.canonical_orientation(X)
        core = repetition_coreset(Xc, w, cfg, 0)
        _write(coreset_to_json(core, Xc), args.output)
        return EXIT_OK

    trace_fh = open(args.trace, "w", encoding="utf-8") if args.trace else None
    try:
        cb = None if trace_fh is None else (lambda rec: trace_fh.write(json.dumps(rec) + "\n"))
        result = run_pipeline_arrays(X, w, cfg, cb)
    finally:
        if trace_fh is not None:
            trace_fh.close()

    _write(dumps_result(result), args.output)
    if args.svg:
        emit_svg(X, result, args.svg)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (InvalidInputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
