"""Command line: generate instances, solve them end to end, verify invariants.

Reports are plain text on standard output and contain nothing
time-dependent, so a fixed (instance, options, seed) triple reproduces
byte-identical bytes; wall-clock timings go to standard error.  Each
error class maps to its own exit code:

    0  success
    2  usage error (bad flags or values)
    3  instance file missing, unreadable or malformed
    4  data parses but is not a connected genus-zero embedding
    5  instance carries no positive demand
    6  a solve stage failed (budget, LP, or rounding)
    7  a verification suite found a violation
    8  generator parameters out of range
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import (
    AllInfinite,
    CapExceeded,
    CycleBudgetExceeded,
    DegenerateMass,
    DisconnectedGraph,
    GraphFormatError,
    InfeasibleModel,
    InvalidParams,
    NoDemand,
    NotPlanarEmbedding,
    NumericalFailure,
    PlancutError,
    SuiteFailed,
)
from .instances import FAMILIES, generate_instance, instance_text, read_instance
from .lp import build_lp, export_lp_text
from .ndhc import NDHC, Caps
from .oracle import all_simple_cycles, brute_force_sparsest
from .profiles import all_profiles
from .planar import DualGraph, EmbeddedPlanarGraph
from .reductions import identity_instance, normalize
from .rounding import GuessOutcome, PipelineConfig, pipeline
from .suites import SUITES, run_suite

__all__ = ["main", "build_parser"]


_EXIT_HELP = """\
exit codes:
  0  success
  2  usage error
  3  instance file missing, unreadable or malformed
  4  data parses but is not a connected genus-zero embedding
  5  instance carries no positive demand
  6  a solve stage failed (budget, LP, or rounding)
  7  a verification suite found a violation
  8  generator parameters out of range
"""


_EXIT_BY_ERROR: list[tuple[type[Exception], int]] = [
    (GraphFormatError, 3),
    (NotPlanarEmbedding, 4),
    (DisconnectedGraph, 4),
    (NoDemand, 5),
    (InvalidParams, 8),
    (SuiteFailed, 7),
    (PlancutError, 6),
]


def _exit_code(exc: PlancutError) -> int:
    for etype, code in _EXIT_BY_ERROR:
        if isinstance(exc, etype):
            return code
    return 6


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    g = generate_instance(
        args.family,
        rows=args.rows,
        cols=args.cols,
        rim=args.rim,
        deletions=args.deletions,
        cost_max=args.cost_max,
        demand_pairs=args.demand_pairs,
        demand_max=args.demand_max,
        seed=args.seed,
    )
    text = instance_text(g)
    if args.out:
        Path(args.out).write_text(text)
        print(
            f"wrote {args.out}: n={g.n} m={len(g.edges)} faces={g.num_faces} "
            f"demand pairs={len(g.demands)}",
            file=sys.stderr,
        )
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    caps = Caps(total_clusters=args.cap_tree) if args.cap_tree else Caps()
    return PipelineConfig(
        seed=args.seed,
        Z=args.z,
        caps=caps,
        amplify_n=args.samples,
        retries=args.retries,
        method=args.method,
        cycle_budget=args.cap_cycles,
        max_guesses=args.max_guesses,
        alpha_min=args.alpha_min,
        alpha_max=args.alpha_max,
        single_guess=args.single_guess,
    )


def _rebuild_model(
    graph: EmbeddedPlanarGraph,
    eps: Fraction,
    cfg: PipelineConfig,
    outcome: GuessOutcome,
):
    """The model behind one outcome, reconstructed for export."""
    norm = (
        identity_instance(graph)
        if cfg.single_guess
        else normalize(graph, outcome.guess_edge, outcome.guess_pair)
    )
    dual = DualGraph(norm.graph)
    tree = NDHC(
        dual,
        eps=eps,
        Z=cfg.Z,
        samples_factor=cfg.samples_factor,
        seed=cfg.seed,
        caps=cfg.caps,
    )
    cycles = all_simple_cycles(dual, budget=cfg.cycle_budget)
    return build_lp(tree, all_profiles(tree, cycles)).with_alpha(outcome.alpha)


def cmd_solve(args: argparse.Namespace) -> int:
    graph = read_instance(args.instance)
    cfg = _pipeline_config(args)
    t0 = time.perf_counter()
    res = pipeline(graph, eps=args.epsilon, config=cfg)
    elapsed = time.perf_counter() - t0

    best, won = res.best, res.best_outcome
    lines = [
        f"instance: {args.instance}",
        f"vertices: {graph.n}  edges: {len(graph.edges)}  faces: {graph.num_faces}"
        f"  total demand: {graph.total_demand()}",
        f"epsilon: {args.epsilon}  seed: {args.seed}  samples: {args.samples}",
        f"best sparsity: {best.sparsity}",
        f"best side: {' '.join(str(v) for v in sorted(best.U))}",
        f"cut edges: {' '.join(str(e) for e in sorted(best.edges))}",
        f"cut cost: {best.cost}",
        f"separated demand: {best.demand}",
        f"guess edge: {won.guess_edge}",
        f"guess pair: {won.guess_pair[0]} {won.guess_pair[1]}",
        f"alpha: {won.alpha}",
        f"lp objective: {won.lp_objective}",
        f"lp method: {won.lp_method}",
        f"outcomes: {len(res.outcomes)}",
        f"events: {len(res.events)}",
    ]
    lines.extend(f"event: {e}" for e in res.events)

    if args.oracle:
        oracle = brute_force_sparsest(graph)
        if oracle.sparsity == 0:
            ratio = Fraction(1) if best.sparsity == 0 else "infinite"
        else:
            ratio = Fraction(best.sparsity) / Fraction(oracle.sparsity)
        lines.append(f"oracle sparsity: {oracle.sparsity}")
        lines.append(f"ratio: {ratio}")

    _emit("\n".join(lines) + "\n", args.out)

    if args.export_lp:
        model = _rebuild_model(graph, args.epsilon, cfg, won)
        Path(args.export_lp).write_text(export_lp_text(model))
        print(f"wrote LP ({model.nvars} vars, {model.nrows} rows) to {args.export_lp}", file=sys.stderr)

    stage = "  ".join(f"{k}={v:.2f}s" for k, v in res.timings.items())
    print(f"timings: {stage}  total={elapsed:.2f}s", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    params: dict[str, object] = {}
    if args.suite == "duality":
        if args.max_edges is not None:
            params["max_edges"] = args.max_edges
        if args.jobs is not None:
            params["jobs"] = args.jobs
    elif args.suite == "decoupling":
        if args.samples is not None:
            params["samples"] = args.samples
        if args.seed is not None:
            params["seed"] = args.seed
    elif args.suite == "ldd":
        if args.samples is not None:
            params["per_seed"] = args.samples
    elif args.suite == "patch":
        if args.seed is not None:
            params["seed"] = args.seed
        if args.z is not None:
            params["Z"] = args.z
    elif args.suite == "lp-marginals":
        if args.samples is not None:
            params["samples"] = args.samples
        if args.seed is not None:
            params["seed"] = args.seed

    res = run_suite(args.suite, **params)
    _emit(res.text(), args.out)
    if not res.passed:
        raise SuiteFailed(f"suite {args.suite} found violations")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plancut",
        description="Sparsest cut on planar graphs: dual cycles, hierarchical "
        "clustering, a lifted LP and randomized rounding.",
        epilog=_EXIT_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a seeded instance file")
    gen.add_argument("--family", choices=FAMILIES, default="grid")
    gen.add_argument("--rows", type=int, default=3, help="grid rows")
    gen.add_argument("--cols", type=int, default=3, help="grid columns")
    gen.add_argument("--rim", type=int, default=5, help="wheel rim length")
    gen.add_argument(
        "--deletions", type=int, default=2, help="edges removed by the random family"
    )
    gen.add_argument("--cost-max", type=int, default=5, help="costs drawn from 1..this")
    gen.add_argument("--demand-pairs", type=int, default=2)
    gen.add_argument("--demand-max", type=int, default=3, help="demands drawn from 1..this")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="file to write; default standard output")
    gen.set_defaults(func=cmd_generate)

    sol = sub.add_parser("solve", help="run the full approximation pipeline")
    sol.add_argument("instance", help="instance file (see the repository README)")
    sol.add_argument(
        "--epsilon", type=Fraction, default=Fraction(1, 2),
        help="approximation slack, e.g. 1/2 or 0.25",
    )
    sol.add_argument("--seed", type=int, default=0)
    sol.add_argument("--z", type=int, default=None, help="crossing budget override")
    sol.add_argument("--samples", type=int, default=200, help="rounding draws kept per threshold")
    sol.add_argument("--retries", type=int, default=50, help="extra draws allowed per kept sample")
    sol.add_argument("--method", choices=("auto", "exact", "float"), default="auto")
    sol.add_argument("--cap-cycles", type=int, default=100_000, help="dual cycle enumeration budget")
    sol.add_argument("--cap-tree", type=int, default=None, help="cluster node budget")
    sol.add_argument("--max-guesses", type=int, default=None)
    sol.add_argument("--alpha-min", type=Fraction, default=None, help="skip demand thresholds below this")
    sol.add_argument("--alpha-max", type=Fraction, default=None, help="stop at this demand threshold")
    sol.add_argument(
        "--single-guess", action="store_true",
        help="treat the instance as already normalized; skip the guess loop",
    )
    sol.add_argument("--oracle", action="store_true", help="compare against brute force")
    sol.add_argument("--export-lp", help="write the winning model in LP text form")
    sol.add_argument("--out", help="also write the report to this file")
    sol.set_defaults(func=cmd_solve)

    ver = sub.add_parser("verify", help="run a named invariant suite")
    ver.add_argument("suite", choices=sorted(SUITES))
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--samples", type=int, default=None, help="sample count where the suite draws")
    ver.add_argument("--max-edges", type=int, default=None, help="duality fixture size bound")
    ver.add_argument("--jobs", type=int, default=None, help="worker threads for fixture sweeps")
    ver.add_argument("--z", type=int, default=None, help="crossing budget for the patch suite")
    ver.add_argument("--out", help="also write the report to this file")
    ver.set_defaults(func=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PlancutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
