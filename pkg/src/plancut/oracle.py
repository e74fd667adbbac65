"""Brute-force references used to validate the main pipeline.

Two independent tools live here: subset enumeration for the exact sparsest
cut, and exhaustive enumeration of simple cycles in the dual.  Both are
exponential and guarded by explicit limits; they exist to be trusted, not to
be fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CycleBudgetExceeded, NoDemand, OracleLimitExceeded
from .planar import (
    CutResult,
    DualCycle,
    DualGraph,
    EmbeddedPlanarGraph,
    cut_result,
    cut_to_cycle,
    is_simple_cut,
)

__all__ = [
    "OracleResult",
    "brute_force_sparsest",
    "all_simple_cycles",
    "sparsest_simple_cycle",
]

DEFAULT_VERTEX_LIMIT = 16


@dataclass(frozen=True)
class OracleResult:
    """Exact optimum over all vertex subsets."""

    witness: CutResult
    simple_witness: CutResult
    ties: int
    evaluated: int

    @property
    def sparsity(self) -> Fraction | float:
        return self.witness.sparsity


def brute_force_sparsest(
    graph: EmbeddedPlanarGraph, limit: int = DEFAULT_VERTEX_LIMIT
) -> OracleResult:
    """Enumerate all proper vertex subsets and return the sparsest cut.

    Sides are canonicalized to exclude vertex 1, halving the work.  The
    sparsest simple cut (both sides connected) is reported alongside; theory
    promises it matches the overall optimum, and tests rely on that.
    """
    n = graph.n
    if n > limit:
        raise OracleLimitExceeded(f"n={n} exceeds oracle limit {limit}")
    if graph.total_demand() == 0:
        raise NoDemand("instance has no positive demand")
    rest = list(range(2, n + 1))
    best: CutResult | None = None
    best_simple: CutResult | None = None
    ties = 0
    evaluated = 0
    for mask in range(1, 1 << len(rest)):
        side = frozenset(rest[i] for i in range(len(rest)) if mask >> i & 1)
        evaluated += 1
        res = cut_result(graph, side)
        if best is None or res.sparsity < best.sparsity:
            best = res
            ties = 1
        elif res.sparsity == best.sparsity:
            ties += 1
        if is_simple_cut(graph, side):
            if best_simple is None or (res.sparsity, len(res.U), sorted(res.U)) < (
                best_simple.sparsity,
                len(best_simple.U),
                sorted(best_simple.U),
            ):
                best_simple = res
    if best is None or best_simple is None:
        raise NoDemand("graph has no proper cut")
    return OracleResult(witness=best, simple_witness=best_simple, ties=ties, evaluated=evaluated)


def all_simple_cycles(dual: DualGraph, budget: int | None = 100_000) -> list[DualCycle]:
    """Every simple cycle of the dual exactly once.

    Self-loops are length-1 cycles; two distinct parallel edges form a
    length-2 cycle.  Cycles are identified by their edge set (a connected
    2-regular subgraph determines its traversal), enumerated by anchored
    depth-first search and returned in a deterministic order.
    """
    g = dual.graph
    found: set[frozenset[int]] = set()

    def record(eids: frozenset[int]) -> None:
        if eids not in found:
            found.add(eids)
            if budget is not None and len(found) > budget:
                raise CycleBudgetExceeded(f"more than {budget} simple cycles")

    for i, (u, v, _) in enumerate(g.edges):
        if u == v:
            record(frozenset({i}))

    adj = g.adjacency()

    def extend(start: int, cur: int, entry_edge: int, path_edges: list[int], visited: set[int]) -> None:
        for w, ei, _ in adj[cur]:
            if ei == entry_edge:
                continue
            if w == start:
                if len(path_edges) >= 1 and ei != path_edges[0]:
                    record(frozenset(path_edges + [ei]))
                continue
            if w > start and w not in visited:
                visited.add(w)
                path_edges.append(ei)
                extend(start, w, ei, path_edges, visited)
                path_edges.pop()
                visited.remove(w)

    for s in range(1, g.n + 1):
        for w, ei, _ in adj[s]:
            if w > s:
                extend(s, w, ei, [ei], {w})

    ordered = sorted(found, key=lambda k: (len(k), sorted(k)))
    return [DualCycle.from_edge_set(dual, k) for k in ordered]


def sparsest_simple_cycle(
    dual: DualGraph, limit: int = DEFAULT_VERTEX_LIMIT
) -> tuple[DualCycle, CutResult]:
    """Minimum-sparsity simple dual cycle via the subset oracle."""
    res = brute_force_sparsest(dual.primal, limit=limit)
    simple = res.simple_witness
    if simple.sparsity == math.inf:
        raise NoDemand("no simple cut separates any demand")
    return cut_to_cycle(dual, simple.U), simple
