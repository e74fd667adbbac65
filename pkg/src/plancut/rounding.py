"""Top-down rounding of the fractional solution and the full pipeline.

The sampler walks the clustering tree from the root.  At a partition node
whose accumulated window trace is W, each child cluster hands the walk to
one of its partition nodes with probability proportional to the node's
profile mass consistent with W, then a profile is drawn proportional to
its own mass and its new faces join the growing face set U.  Feasibility
of the solution makes every conditional step a probability distribution,
so a node ends up on the walk with trace S with probability exactly the
value of its profile variable.

The demand side loses at most half: when a demand pair resolves in forked
branches the two sides are chosen independently given the meeting node,
and the quadratic decoupling bound turns the pair's fractional separation
mass into a separation probability at least half as large.  Amplification
then keeps the sparsest of many independent samples, and the pipeline
drives the whole stack over normalization guesses and demand thresholds.
"""

from __future__ import annotations

import time
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (
    AllInfinite,
    CycleBudgetExceeded,
    DegenerateMass,
    InfeasibleModel,
    NoDemand,
    NotOnSimplex,
    NumericalFailure,
    PreconditionViolated,
)
from .lp import LpModel, LpSolution, alpha_grid, build_lp, solve_lp
from .ndhc import NDHC, Caps
from .oracle import all_simple_cycles
from .planar import CutResult, DualGraph, EmbeddedPlanarGraph, cut_result, simplify_cut
from .profiles import all_profiles
from .reductions import guesses, identity_instance, normalize
from .rng import derive

__all__ = [
    "RoundingTrace",
    "Rounder",
    "round_topdown",
    "decoupling_lhs",
    "amplify",
    "PipelineConfig",
    "GuessOutcome",
    "PipelineResult",
    "pipeline",
]


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RoundingTrace:
    """One descent: the forcing it chose, the trace per node, the faces."""

    forcing: dict[int, int]
    chosen: dict[int, frozenset[int]]
    U: frozenset[int]
    seed: object | None = None


def _cumulative(masses: list[float]) -> list[float]:
    total = sum(masses)
    out, acc = [], 0.0
    for m in masses:
        acc += m / total
        out.append(acc)
    out[-1] = 1.0
    return out


class Rounder:
    """Reusable top-down sampler over one model and one solution vector.

    Conditional distributions are derived lazily per reachable state and
    cached, so drawing many samples costs little beyond the walks
    themselves.  Mass that deviates from the parent variable by more than
    ten times ``tolerance`` stops the sampler; smaller deviations are
    renormalized away as solver noise.
    """

    def __init__(
        self,
        tree: NDHC,
        model: LpModel,
        values: Sequence[Fraction | float] | Mapping,
        tolerance: float = 1e-7,
    ) -> None:
        if isinstance(values, Mapping):
            values = model.vector(values)
        self.tree = tree
        self.tolerance = tolerance
        self.bplus = [
            tree.boundary_plus(pid) for pid in range(len(tree.partitions))
        ]
        self.x: list[dict[frozenset[int], Fraction | float]] = [
            {} for _ in tree.partitions
        ]
        for i, key in enumerate(model.keys):
            if key[0] == "x":
                _, pid, S = key
                self.x[pid][S] = values[i]
        self._plans: dict[tuple[int, frozenset[int]], tuple] = {}

    def _plan(self, cid: int, W: frozenset[int]):
        cached = self._plans.get((cid, W))
        if cached is not None:
            return cached
        cluster = self.tree.clusters[cid]
        parent = cluster.parent
        assert parent is not None
        window = self.bplus[parent]
        target = self.x[parent].get(W, 0)
        children: list[tuple[int, list[frozenset[int]], list[float]]] = []
        masses: list[float] = []
        for pid in cluster.partitions:
            cands = [
                (S, v)
                for S, v in self.x[pid].items()
                if v > 0 and S & window == W
            ]
            mass = float(sum(v for _, v in cands))
            if cands:
                children.append(
                    (pid, [S for S, _ in cands], _cumulative([float(v) for _, v in cands]))
                )
                masses.append(mass)
        total = sum(masses)
        if total <= self.tolerance or abs(total - float(target)) > 10 * self.tolerance:
            raise DegenerateMass(
                f"cluster {cid} at window {sorted(W)}: children carry mass "
                f"{total:.3g} against x value {float(target):.3g}"
            )
        plan = (children, _cumulative(masses))
        self._plans[(cid, W)] = plan
        return plan

    def sample(
        self, rng: np.random.Generator, seed: object | None = None
    ) -> RoundingTrace:
        tree = self.tree
        root = tree.root_partition
        chosen: dict[int, frozenset[int]] = {root: frozenset()}
        forcing: dict[int, int] = {}
        U: set[int] = set()
        stack = [root]
        while stack:
            p = stack.pop()
            W = chosen[p]
            for cid in tree.partitions[p].children:
                if not tree.clusters[cid].partitions:
                    continue
                children, child_cum = self._plan(cid, W)
                pid, profiles, prof_cum = children[bisect_right(child_cum, rng.random())]
                S = profiles[bisect_right(prof_cum, rng.random())]
                forcing[cid] = pid
                chosen[pid] = S
                U.update(S - W)
                stack.append(pid)
        return RoundingTrace(
            forcing=forcing, chosen=chosen, U=frozenset(U), seed=seed
        )


def round_topdown(
    tree: NDHC,
    model: LpModel,
    solution: LpSolution | Sequence[Fraction | float] | Mapping,
    rng: np.random.Generator,
    tolerance: float = 1e-7,
) -> frozenset[int]:
    """Draw one face set; build a :class:`Rounder` for repeated draws."""
    values = solution.values if isinstance(solution, LpSolution) else solution
    return Rounder(tree, model, values, tolerance=tolerance).sample(rng).U


# ---------------------------------------------------------------------------
# the decoupling bound and amplification
# ---------------------------------------------------------------------------


def decoupling_lhs(a, b, c, d):
    """(a+b)(b+d) + (a+c)(c+d) for a probability four-tuple.

    The value is never below (b+c)/2, which is what converts fractional
    separation mass into an actual separation probability; the tests
    exercise the bound over random simplex points.
    """
    if a < 0 or b < 0 or c < 0 or d < 0:
        raise NotOnSimplex("negative probability")
    total = a + b + c + d
    if abs(float(total) - 1.0) > 1e-9:
        raise NotOnSimplex(f"mass {float(total)!r} is not 1")
    return (a + b) * (b + d) + (a + c) * (c + d)


def amplify(
    sampler: Callable[[np.random.Generator], CutResult],
    N: int,
    rng: np.random.Generator,
    retries: int = 50,
) -> CutResult:
    """Sparsest cut among up to ``N`` finite-sparsity samples.

    Draws separating no demand are discarded and retried, up to
    ``N * retries`` attempts in all; if not a single draw separates
    demand the sampler is declared degenerate.
    """
    if N < 1:
        raise PreconditionViolated("need at least one sample")
    cuts: list[CutResult] = []
    attempts, budget = 0, N * max(1, retries)
    while len(cuts) < N and attempts < budget:
        attempts += 1
        cut = sampler(rng)
        if cut.demand > 0:
            cuts.append(cut)
    if not cuts:
        raise AllInfinite(f"no demand separated in {attempts} samples")
    return min(cuts, key=lambda r: (r.sparsity, len(r.U), sorted(r.U)))


# ---------------------------------------------------------------------------
# the end-to-end pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineConfig:
    """Desk-scale knobs; defaults suit graphs of up to a dozen vertices."""

    seed: int = 0
    Z: int | None = None
    samples_factor: int = 2
    caps: Caps = field(default_factory=Caps)
    amplify_n: int = 200
    retries: int = 50
    method: str = "auto"
    tolerance: float = 1e-7
    cycle_budget: int | None = 100_000
    max_guesses: int | None = None
    max_alphas: int | None = None
    alpha_min: Fraction | None = None
    alpha_max: Fraction | None = None
    single_guess: bool = False


@dataclass(frozen=True)
class GuessOutcome:
    """One (normalization guess, demand threshold) attempt that produced a cut."""

    guess_edge: int
    guess_pair: tuple[int, int]
    alpha: Fraction
    lp_objective: Fraction | float
    lp_method: str
    cut: CutResult


@dataclass
class PipelineResult:
    best: CutResult
    best_outcome: GuessOutcome
    outcomes: list[GuessOutcome]
    events: list[str]
    timings: dict[str, float]


def _cut_rank(res: CutResult):
    return (res.sparsity, len(res.U), sorted(res.U))


def pipeline(
    graph: EmbeddedPlanarGraph,
    eps: Fraction | float = Fraction(1, 2),
    config: PipelineConfig | None = None,
) -> PipelineResult:
    """Normalize, cluster, solve, round; return the sparsest cut found.

    Every guess rewrites the instance, builds its own tree and profile
    sets, then shares one model across the demand-threshold grid with
    only the threshold row retargeted.  Failures of individual guesses
    or thresholds are recorded as events and skipped; only a run where
    nothing at all produced a cut raises.
    """
    cfg = config or PipelineConfig()
    if graph.total_demand() == 0:
        raise NoDemand("instance has no positive demand")

    timings = {"normalize": 0.0, "tree": 0.0, "profiles": 0.0, "lp": 0.0, "round": 0.0}
    events: list[str] = []
    outcomes: list[GuessOutcome] = []
    best: tuple[CutResult, GuessOutcome] | None = None

    guess_stream = [(-1, (0, 0))] if cfg.single_guess else guesses(graph)
    for gi, (ei, pair) in enumerate(guess_stream):
        if cfg.max_guesses is not None and gi >= cfg.max_guesses:
            break
        t0 = time.perf_counter()
        try:
            norm = (
                identity_instance(graph)
                if cfg.single_guess
                else normalize(graph, ei, pair)
            )
        except (PreconditionViolated, NoDemand) as exc:
            events.append(f"guess {ei},{pair}: {exc}")
            continue
        finally:
            timings["normalize"] += time.perf_counter() - t0

        t0 = time.perf_counter()
        dual = DualGraph(norm.graph)
        tree = NDHC(
            dual,
            eps=eps,
            Z=cfg.Z,
            samples_factor=cfg.samples_factor,
            seed=cfg.seed,
            caps=cfg.caps,
        )
        events.extend(f"guess {ei},{pair}: {e}" for e in tree.events)
        timings["tree"] += time.perf_counter() - t0

        t0 = time.perf_counter()
        try:
            cycles = all_simple_cycles(dual, budget=cfg.cycle_budget)
        except CycleBudgetExceeded as exc:
            events.append(f"guess {ei},{pair}: {exc}")
            timings["profiles"] += time.perf_counter() - t0
            continue
        profs = all_profiles(tree, cycles)
        timings["profiles"] += time.perf_counter() - t0

        t0 = time.perf_counter()
        base = build_lp(tree, profs)
        timings["lp"] += time.perf_counter() - t0
        total_demand = norm.graph.total_demand()

        for ai, alpha in enumerate(alpha_grid(norm.graph.n, eps)):
            if cfg.max_alphas is not None and ai >= cfg.max_alphas:
                break
            if cfg.alpha_max is not None and alpha > cfg.alpha_max:
                break
            if alpha > total_demand:
                break
            if cfg.alpha_min is not None and alpha < cfg.alpha_min:
                continue
            t0 = time.perf_counter()
            model = base.with_alpha(alpha)
            try:
                sol = solve_lp(model, tolerance=cfg.tolerance, method=cfg.method)
            except InfeasibleModel:
                timings["lp"] += time.perf_counter() - t0
                break
            except NumericalFailure as exc:
                timings["lp"] += time.perf_counter() - t0
                events.append(f"guess {ei},{pair} alpha {alpha}: {exc}")
                continue
            timings["lp"] += time.perf_counter() - t0

            t0 = time.perf_counter()
            rounder = Rounder(tree, model, sol.values, tolerance=cfg.tolerance)

            def sampler(rng: np.random.Generator) -> CutResult:
                U = rounder.sample(rng).U
                if U and len(U) < norm.graph.n:
                    return simplify_cut(norm.graph, U)
                return cut_result(norm.graph, U)

            try:
                cut_norm = amplify(
                    sampler,
                    cfg.amplify_n,
                    derive(cfg.seed, "round", ei, pair, ai),
                    retries=cfg.retries,
                )
            except (AllInfinite, DegenerateMass) as exc:
                events.append(f"guess {ei},{pair} alpha {alpha}: {exc}")
                continue
            finally:
                timings["round"] += time.perf_counter() - t0

            lifted = simplify_cut(graph, norm.lift_side(cut_norm.U))
            outcome = GuessOutcome(
                guess_edge=ei,
                guess_pair=pair,
                alpha=alpha,
                lp_objective=sol.objective,
                lp_method=sol.method,
                cut=lifted,
            )
            outcomes.append(outcome)
            if best is None or _cut_rank(lifted) < _cut_rank(best[0]):
                best = (lifted, outcome)

    if best is None:
        raise AllInfinite("no guess produced a demand-separating cut")
    return PipelineResult(
        best=best[0],
        best_outcome=best[1],
        outcomes=outcomes,
        events=events,
        timings=timings,
    )
