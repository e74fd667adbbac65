"""Deterministic shortest paths on embedded graphs.

Dijkstra with ties broken by vertex id and adjacency order, so repeated runs
reconstruct identical paths.  Distances are exact integers (edge costs are
integers throughout).
"""

from __future__ import annotations

import heapq
from typing import Iterable

from .errors import PreconditionViolated
from .planar import EmbeddedPlanarGraph, dart_edge

__all__ = ["dijkstra", "path_darts", "eccentricity", "weighted_diameter"]


def dijkstra(
    graph: EmbeddedPlanarGraph,
    source: int,
    allowed: Iterable[int] | None = None,
) -> tuple[dict[int, int], dict[int, int]]:
    """Distances and parent darts from ``source`` inside ``graph[allowed]``.

    Returns ``(dist, parent_dart)``; ``parent_dart[v]`` is the dart entering
    ``v`` on the chosen shortest path (absent for the source).
    """
    allow = None if allowed is None else frozenset(allowed)
    if allow is not None and source not in allow:
        raise PreconditionViolated(f"source {source} not in allowed set")
    dist: dict[int, int] = {source: 0}
    parent: dict[int, int] = {}
    done: set[int] = set()
    heap: list[tuple[int, int]] = [(0, source)]
    adj = graph.adjacency()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for w, ei, cost in adj[v]:
            if allow is not None and w not in allow:
                continue
            nd = d + cost
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                dart = 2 * ei if graph.edges[ei].u == v else 2 * ei + 1
                parent[w] = dart
                heapq.heappush(heap, (nd, w))
    return dist, parent


def path_darts(
    graph: EmbeddedPlanarGraph, parent: dict[int, int], target: int
) -> tuple[int, ...]:
    """Darts of the tree path from the source down to ``target``."""
    out: list[int] = []
    v = target
    while v in parent:
        d = parent[v]
        out.append(d)
        v = graph.dart_tail(d)
    return tuple(reversed(out))


def eccentricity(
    graph: EmbeddedPlanarGraph, source: int, allowed: Iterable[int] | None = None
) -> int:
    dist, _ = dijkstra(graph, source, allowed)
    want = frozenset(allowed) if allowed is not None else frozenset(graph.vertices())
    if set(dist) != set(want):
        raise PreconditionViolated("allowed set is not connected from source")
    return max(dist.values())


def weighted_diameter(
    graph: EmbeddedPlanarGraph, allowed: Iterable[int] | None = None
) -> int:
    """Largest shortest-path distance between vertices of ``graph[allowed]``."""
    verts = sorted(allowed) if allowed is not None else list(graph.vertices())
    return max(eccentricity(graph, v, verts) for v in verts)
