"""Low-diameter decomposition by iterated exponential ball carving.

Centers are drawn uniformly from the not-yet-assigned vertices; each center
carves the ball of a truncated-exponential radius (rate ``2 ln(n+1) / D``,
support ``[0, D/2]``) in the subgraph induced by the remaining vertices.
Shortest-path prefixes stay inside the ball, so every part has strong
diameter at most ``D``.  The probability that a given edge is separated is
proportional to ``cost / D`` up to a logarithmic factor, which
:func:`estimate_beta` measures empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import PreconditionViolated
from .paths import dijkstra, weighted_diameter
from .planar import EmbeddedPlanarGraph
from .rng import derive

__all__ = ["Decomposition", "ldd", "check_strong_diameter", "BetaEstimate", "estimate_beta"]


@dataclass(frozen=True)
class Decomposition:
    parts: tuple[frozenset[int], ...]
    centers: tuple[int, ...]
    radii: tuple[float, ...]
    cut_edges: frozenset[int]

    def part_of(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for i, p in enumerate(self.parts):
            for v in p:
                out[v] = i
        return out


def _truncated_exponential(rng: np.random.Generator, rate: float, cap: float) -> float:
    u = float(rng.random())
    return -math.log1p(-u * (1.0 - math.exp(-rate * cap))) / rate


def ldd(
    graph: EmbeddedPlanarGraph,
    D: Fraction | int,
    rng: np.random.Generator,
    allowed: Iterable[int] | None = None,
) -> Decomposition:
    """Partition ``graph[allowed]`` into parts of strong diameter at most D."""
    if D <= 0:
        raise PreconditionViolated(f"diameter bound must be positive, got {D}")
    remaining = set(allowed) if allowed is not None else set(graph.vertices())
    universe = frozenset(remaining)
    n = len(remaining)
    rate = 2.0 * math.log(n + 1) / float(D)
    cap = float(D) / 2.0
    parts: list[frozenset[int]] = []
    centers: list[int] = []
    radii: list[float] = []
    while remaining:
        pool = sorted(remaining)
        center = pool[int(rng.integers(len(pool)))]
        r = _truncated_exponential(rng, rate, cap)
        dist, _ = dijkstra(graph, center, remaining)
        ball = frozenset(v for v, d in dist.items() if d <= r)
        parts.append(ball)
        centers.append(center)
        radii.append(r)
        remaining -= ball
    part_of: dict[int, int] = {}
    for i, p in enumerate(parts):
        for v in p:
            part_of[v] = i
    cut = frozenset(
        i
        for i, (u, v, _) in enumerate(graph.edges)
        if u in universe and v in universe and u != v and part_of[u] != part_of[v]
    )
    return Decomposition(tuple(parts), tuple(centers), tuple(radii), cut)


def check_strong_diameter(
    graph: EmbeddedPlanarGraph, decomp: Decomposition, D: Fraction | int
) -> bool:
    """Every part induces a connected subgraph of weighted diameter <= D."""
    for part in decomp.parts:
        if weighted_diameter(graph, part) > D:
            return False
    return True


@dataclass(frozen=True)
class BetaEstimate:
    beta_hat: float
    samples: int
    cut_freq: dict[int, float]
    diameter_violations: int


def estimate_beta(
    graph: EmbeddedPlanarGraph,
    D: Fraction | int,
    master_seed: int,
    samples: int,
    allowed: Iterable[int] | None = None,
) -> BetaEstimate:
    """Empirical edge-cutting rate of the decomposition, normalized by cost/D.

    ``beta_hat`` is the maximum over positive-cost edges of
    ``frequency * D / cost``; the theory promises it stays logarithmic in the
    vertex count.  Strong-diameter failures are counted, not tolerated.
    """
    universe = frozenset(allowed) if allowed is not None else frozenset(graph.vertices())
    counts = {i: 0 for i, (u, v, _) in enumerate(graph.edges) if u in universe and v in universe and u != v}
    violations = 0
    for k in range(samples):
        rng = derive(master_seed, "ldd", str(k))
        dec = ldd(graph, D, rng, universe)
        if not check_strong_diameter(graph, dec, D):
            violations += 1
        for ei in dec.cut_edges:
            counts[ei] += 1
    freq = {i: c / samples for i, c in counts.items()}
    beta = 0.0
    for i, f in freq.items():
        cost = graph.edges[i].cost
        if cost > 0:
            beta = max(beta, f * float(D) / cost)
    return BetaEstimate(beta, samples, freq, violations)
