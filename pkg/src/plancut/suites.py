"""Named verification suites shared by the command line and the test battery.

Each suite re-checks one pillar of the algorithm from an independent
direction: cut/cycle duality by exhaustion, the quadratic decoupling
bound by mass sampling, ball-carving diameters and cut rates
empirically, the patching harness on a fixture battery, and the
rounding marginal law against solved models.  A suite never raises on a
violated invariant; it reports, and the caller decides what failure
means (the command line maps it to an exit code, the tests to an
assertion).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import PreconditionViolated
from .families import (
    cycle_graph,
    duality_fixture_set,
    grid_graph,
    k4,
    stellated_pair,
    theta_graph,
    wheel_graph,
    with_demands,
)
from .ldd import estimate_beta
from .lp import build_lp, encode_integral, forcing_for_cycle, solve_lp
from .ndhc import NDHC
from .oracle import all_simple_cycles, sparsest_simple_cycle
from .patch_verify import run_virtual
from .planar import (
    DualGraph,
    EmbeddedPlanarGraph,
    cut_result,
    cut_to_cycle,
    cycle_to_cut,
    is_simple_cut,
)
from .profiles import all_profiles
from .rng import derive
from .rounding import Rounder, decoupling_lhs

__all__ = ["SuiteResult", "SUITES", "run_suite"]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    stats: dict[str, object]
    lines: list[str]

    def text(self) -> str:
        """Stable report; no timestamps or timings, so bytes reproduce."""
        out = [f"suite {self.name}: {'PASS' if self.passed else 'FAIL'}"]
        out.extend(f"  {line}" for line in self.lines)
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# duality by exhaustion
# ---------------------------------------------------------------------------


def _simple_cut_sides(g: EmbeddedPlanarGraph) -> list[frozenset[int]]:
    rest = list(range(2, g.n + 1))
    out = []
    for mask in range(1, 1 << len(rest)):
        side = frozenset(rest[i] for i in range(len(rest)) if mask >> i & 1)
        if is_simple_cut(g, side):
            out.append(side)
    return out


def _check_duality_fixture(item: tuple[str, EmbeddedPlanarGraph]) -> tuple[str, int, list[str]]:
    name, g = item
    dem = {(1, g.n): 2}
    if g.n >= 4:
        dem[(2, g.n - 1)] = 1
    gd = with_demands(g, dem)
    dual = DualGraph(gd)
    bad: list[str] = []

    cycles = all_simple_cycles(dual)
    cuts = _simple_cut_sides(gd)
    if len(cuts) != len(cycles):
        bad.append(f"{name}: {len(cuts)} simple cuts vs {len(cycles)} simple cycles")
    keys = {c.key for c in cycles}
    for side in cuts:
        if cut_to_cycle(dual, side).key not in keys:
            bad.append(f"{name}: cut {sorted(side)} has no matching cycle")

    for cyc in cycles:
        cost = sum(gd.edges[i].cost for i in cyc.key)
        sep = sum(
            d
            for (a, b), d in gd.demands.items()
            if (a in cyc.inside) != (b in cyc.inside)
        )
        objective = Fraction(cost, sep) if sep else math.inf
        cut = cut_result(gd, cyc.inside)
        back = cycle_to_cut(cyc)
        if cut.edges != cyc.key or back.edges != cyc.key:
            bad.append(f"{name}: cycle {sorted(cyc.key)} crosses {sorted(cut.edges)}")
        if cut.sparsity != objective or cut.cost != cost:
            bad.append(f"{name}: cycle objective {objective} vs cut {cut.sparsity}")
    return name, len(cycles), bad


def run_duality(max_edges: int = 8, jobs: int | None = None) -> SuiteResult:
    """Simple cuts and simple dual cycles agree, fixture by fixture."""
    fixtures = duality_fixture_set(max_edges)
    workers = jobs or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(_check_duality_fixture, fixtures))
    failures = [line for _, _, bad in results for line in bad]
    total_cycles = sum(c for _, c, _ in results)
    lines = [
        f"fixtures: {len(fixtures)} (at most {max_edges} edges)",
        f"cycles matched to cuts: {total_cycles}",
    ] + failures
    return SuiteResult(
        name="duality",
        passed=not failures,
        stats={"fixtures": len(fixtures), "cycles": total_cycles, "failures": len(failures)},
        lines=lines,
    )


# ---------------------------------------------------------------------------
# the decoupling inequality under mass sampling
# ---------------------------------------------------------------------------


def run_decoupling(samples: int = 1_000_000, seed: int = 0, slack: float = 1e-12) -> SuiteResult:
    """(a+b)(b+d) + (a+c)(c+d) >= (b+c)/2 over uniform simplex points."""
    rng = derive(seed, "decoupling")
    raw = rng.exponential(size=(samples, 4))
    pts = raw / raw.sum(axis=1, keepdims=True)
    a, b, c, d = pts.T
    margin = (a + b) * (b + d) + (a + c) * (c + d) - (b + c) / 2
    worst = int(np.argmin(margin))
    scalar = decoupling_lhs(*pts[worst]) - (pts[worst, 1] + pts[worst, 2]) / 2
    agree = abs(scalar - float(margin[worst])) <= 1e-9
    passed = bool(margin[worst] >= -slack) and agree
    lines = [
        f"samples: {samples}",
        f"worst margin: {margin[worst]:.6e} (allowed slack {slack:g})",
        f"scalar route agrees: {'yes' if agree else 'NO'}",
    ]
    return SuiteResult(
        name="decoupling",
        passed=passed,
        stats={"samples": samples, "worst_margin": float(margin[worst])},
        lines=lines,
    )


# ---------------------------------------------------------------------------
# ball carving: diameters hard, cut rates statistical
# ---------------------------------------------------------------------------


def run_ldd(
    per_seed: int = 2000,
    seeds: tuple[int, ...] = (0, 1, 2),
    diameters: tuple[int, ...] = (4, 8),
    rel_spread: float = 0.2,
    rows: int = 5,
    cols: int = 5,
) -> SuiteResult:
    """Parts stay within diameter on every draw; the cut rate is stable."""
    g = grid_graph(rows, cols)
    lines = [f"graph: {rows}x{cols} grid, {per_seed} samples per seed, seeds {list(seeds)}"]
    violations = 0
    stable = True
    betas: dict[int, list[float]] = {}
    for D in diameters:
        per_D = []
        for s in seeds:
            est = estimate_beta(g, D, s, per_seed)
            violations += est.diameter_violations
            per_D.append(est.beta_hat)
        betas[D] = per_D
        mean = sum(per_D) / len(per_D)
        off = max(abs(b - mean) for b in per_D)
        if mean == 0 or off > rel_spread * mean:
            stable = False
        lines.append(
            f"D={D}: beta_hat {['%.3f' % b for b in per_D]} spread {off / mean:.3f}"
            if mean
            else f"D={D}: no edges cut"
        )
    total = per_seed * len(seeds) * len(diameters)
    lines.append(f"diameter violations: {violations} in {total} draws")
    return SuiteResult(
        name="ldd",
        passed=violations == 0 and stable,
        stats={"samples": total, "violations": violations, "betas": betas},
        lines=lines,
    )


# ---------------------------------------------------------------------------
# the patching harness over a fixture battery
# ---------------------------------------------------------------------------


def patch_fixture_battery() -> list[tuple[str, EmbeddedPlanarGraph]]:
    """Twenty-plus demand-carrying instances with at most twelve vertices."""
    items: list[tuple[str, EmbeddedPlanarGraph]] = []

    def add(name: str, g: EmbeddedPlanarGraph, dem: dict[tuple[int, int], int]) -> None:
        items.append((name, with_demands(g, dem)))

    add("c4", cycle_graph(4), {(1, 3): 1})
    add("c4-costs", cycle_graph(4, costs=[1, 2, 3, 4]), {(2, 4): 2})
    add("c5", cycle_graph(5), {(1, 3): 1, (2, 5): 1})
    add("c6", cycle_graph(6), {(1, 4): 2})
    add("c8", cycle_graph(8), {(1, 5): 1, (3, 7): 1})
    add("theta3", theta_graph(3), {(1, 2): 2})
    add("theta4", theta_graph(4, costs=[1, 3, 2, 5]), {(1, 2): 1})
    add("k4", k4(), {(1, 3): 1})
    add("k4-costs", k4(costs=[2, 1, 4, 1, 3, 2]), {(2, 4): 2})
    add("grid22", grid_graph(2, 2), {(1, 4): 1})
    add("grid23", grid_graph(2, 3), {(1, 6): 1})
    add("grid23-costs", grid_graph(2, 3, costs=[2, 1, 3, 1, 2, 1, 4]), {(2, 5): 2})
    add("grid24", grid_graph(2, 4), {(1, 8): 1})
    add("grid33", grid_graph(3, 3), {(1, 9): 1})
    add("grid33-pair", grid_graph(3, 3), {(3, 7): 2, (1, 9): 1})
    add("grid25", grid_graph(2, 5), {(1, 10): 1})
    add("grid26", grid_graph(2, 6), {(1, 12): 2})
    add("wheel4", wheel_graph(4), {(1, 3): 1})
    add("wheel5", wheel_graph(5), {(2, 4): 2})
    add("wheel6", wheel_graph(6), {(1, 4): 1, (2, 5): 1})
    add("stellated", stellated_pair(demands={(7, 8): 1}), {(7, 8): 1})
    return items


def run_patch(Z: int | None = None, seed: int = 0) -> SuiteResult:
    """Replay the hierarchy against each fixture's sparsest simple cycle.

    Checks per run: the survivors cover separation and parity exactly,
    the total cost stays within 1 + 12 * levels / Z of the reference
    cycle, and every survivor certifies a forcing with all crossing
    counts within budget.
    """
    battery = patch_fixture_battery()
    failures: list[str] = []
    worst_ratio = Fraction(0)
    for name, g in battery:
        dual = DualGraph(g)
        C0, _ = sparsest_simple_cycle(dual)
        rep = run_virtual(dual, C0, Z=Z, seed=seed)
        if rep.failed:
            failures.append(f"{name}: {rep.failure_reason}")
            continue
        if not (rep.separation_demand_ok and rep.separation_faces_ok and rep.parity_ok):
            failures.append(f"{name}: separation or parity cover broken")
        bound = 1 + Fraction(12 * max(rep.levels, 0), rep.Z)
        if rep.cost_ratio > bound:
            failures.append(f"{name}: cost ratio {rep.cost_ratio} above {bound}")
        if not rep.amenable_ok:
            failures.append(f"{name}: a surviving walk has no in-budget forcing")
        worst_ratio = max(worst_ratio, rep.cost_ratio)
    lines = [
        f"fixtures: {len(battery)}",
        f"worst cost ratio: {worst_ratio} ({float(worst_ratio):.4f})",
    ] + failures
    return SuiteResult(
        name="patch",
        passed=not failures,
        stats={
            "fixtures": len(battery),
            "failures": len(failures),
            "worst_ratio": worst_ratio,
        },
        lines=lines,
    )


# ---------------------------------------------------------------------------
# rounding marginals against solved models
# ---------------------------------------------------------------------------


def _square_setup():
    g = with_demands(cycle_graph(4), {(1, 3): 1})
    tree = NDHC(DualGraph(g), seed=3)
    cycles = all_simple_cycles(tree.dual)
    profs = all_profiles(tree, cycles)
    return tree, cycles, profs, build_lp(tree, profs)


def _separating_mixture(tree, cycles, profs, model):
    weights = {
        frozenset({3}): Fraction(1, 2),
        frozenset({2, 3}): Fraction(1, 3),
        frozenset({2, 3, 4}): Fraction(1, 6),
    }
    by_inside = {c.inside: c for c in cycles}
    mix: dict = {}
    for inside, w in weights.items():
        c = by_inside[inside]
        enc = encode_integral(c, forcing_for_cycle(tree, c), tree, profs)
        for key, val in enc.items():
            mix[key] = mix.get(key, Fraction(0)) + w * val
    return model.vector(mix)


def _marginal_check(tree, model, values, samples, rng) -> tuple[float, list[str]]:
    """Worst z-score over node marginals and pair separation rates."""
    rounder = Rounder(tree, model, values)
    dense = model.vector(values) if isinstance(values, dict) else list(values)
    node_keys = [
        (key, float(dense[i]))
        for i, key in enumerate(model.keys)
        if key[0] == "x" and float(dense[i]) > 1e-9
    ]
    pairs = {
        pair: float(dense[model.index[("yst", pair)]])
        for pair in [*model.cost_pairs, *model.demand_pairs]
    }
    node_hits = {key: 0 for key, _ in node_keys}
    sep_hits = {pair: 0 for pair in pairs}
    for _ in range(samples):
        trace = rounder.sample(rng)
        for (key, _v) in node_keys:
            _, pid, S = key
            if trace.chosen.get(pid) == S:
                node_hits[key] += 1
        for (s, t) in pairs:
            if (s in trace.U) != (t in trace.U):
                sep_hits[(s, t)] += 1
    worst = 0.0
    bad: list[str] = []

    def judge(label: str, hit: int, p: float) -> None:
        nonlocal worst
        sigma = math.sqrt(max(p * (1 - p), 0.0) / samples)
        dev = abs(hit / samples - p)
        if sigma:
            worst = max(worst, dev / sigma)
            if dev > 3 * sigma:
                bad.append(f"{label}: {hit / samples:.4f} vs {p:.4f} ({dev / sigma:.1f} sigma)")
        elif dev:
            bad.append(f"{label}: {hit / samples:.4f} vs exact {p:.4f}")

    for key, p in node_keys:
        judge(f"x{key[1:]}", node_hits[key], min(p, 1.0))
    for pair, p in pairs.items():
        judge(f"sep{pair}", sep_hits[pair], min(p, 1.0))
    return worst, bad


def run_lp_marginals(samples: int = 20_000, seed: int = 11) -> SuiteResult:
    """Rounding frequencies track the solution, solved and hand-mixed."""
    tree, cycles, profs, model = _square_setup()
    failures: list[str] = []
    worst = 0.0

    sol = solve_lp(model)
    w1, bad1 = _marginal_check(tree, model, sol.values, samples, derive(seed, "marg", "solved"))
    failures += [f"solved: {b}" for b in bad1]

    mix = _separating_mixture(tree, cycles, profs, model)
    w2, bad2 = _marginal_check(tree, model, mix, samples, derive(seed, "marg", "mixture"))
    failures += [f"mixture: {b}" for b in bad2]
    worst = max(w1, w2)

    lines = [
        f"samples per vector: {samples}",
        f"worst deviation: {worst:.2f} sigma (band: 3)",
    ] + failures
    return SuiteResult(
        name="lp-marginals",
        passed=not failures,
        stats={"samples": samples, "worst_sigma": worst},
        lines=lines,
    )


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

SUITES: dict[str, Callable[..., SuiteResult]] = {
    "duality": run_duality,
    "decoupling": run_decoupling,
    "ldd": run_ldd,
    "patch": run_patch,
    "lp-marginals": run_lp_marginals,
}


def run_suite(name: str, **params: object) -> SuiteResult:
    if name not in SUITES:
        raise PreconditionViolated(
            f"unknown suite {name!r}; pick one of {sorted(SUITES)}"
        )
    return SUITES[name](**params)
