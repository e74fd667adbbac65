"""Instance normalization by guessing a cut edge and a demand pair.

For a guess ``(e, {s, t})`` the instance is rewritten so that, whenever the
guess is correct for some optimal cut (``e`` its costliest edge, ``{s, t}``
its largest separated demand), the rewritten instance has integer costs in
``[0, n^2]`` and integer demands in ``[0, n^3]`` while the optimum moves by
at most a ``(1 + 3/n) / (1 - 1/n)`` factor:

* every edge costlier than ``e`` is contracted (the embedding is spliced,
  never re-derived), and all self-loops are dropped;
* costs are rounded up to multiples of ``cost(e) / n^2``;
* demands are aggregated along the contraction, pairs exceeding the guess
  pair's aggregated demand are deleted, and the rest are rounded down to
  multiples of that demand over ``n^3``.

Costs rounding up keeps every cut at least as expensive, and a planar graph
has fewer than ``3n`` edges, so a cut gains at most ``3n`` units against an
optimum of at least ``n^2`` units.  Demands rounding down lose at most one
unit per pair, at most ``n^2`` units against ``n^3`` for the guess pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import NoDemand, PreconditionViolated
from .planar import EmbeddedPlanarGraph, dart_edge, dart_rev

__all__ = [
    "contract_edges",
    "ContractionResult",
    "NormalizedInstance",
    "normalize",
    "identity_instance",
    "guesses",
    "quality_ratio_bound",
]


# ---------------------------------------------------------------------------
# contraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContractionResult:
    graph: EmbeddedPlanarGraph
    vertex_map: tuple[int, ...]
    """Original vertex -> new vertex (index 0 unused)."""
    edge_map: tuple[int | None, ...]
    """Original edge id -> new edge id, ``None`` for contracted or dropped."""


def contract_edges(
    graph: EmbeddedPlanarGraph, edge_ids: Iterable[int], *, drop_loops: bool = True
) -> ContractionResult:
    """Contract the given edges, splicing rotations to keep the embedding.

    Contracting a self-loop deletes it.  With ``drop_loops`` every self-loop
    of the result (pre-existing or created by the contraction) is deleted as
    well; loops never participate in cuts, so nothing of interest is lost.
    """
    m = len(graph.edges)
    to_contract = set(edge_ids)
    for ei in to_contract:
        if not (0 <= ei < m):
            raise PreconditionViolated(f"unknown edge id {ei}")

    # mutable dart-level state: tail of each dart, rotation as circular lists
    tail = [graph.dart_tail(2 * i + b) for i in range(m) for b in (0, 1)]
    rot: dict[int, list[int]] = {
        v: list(graph.rotation_at(v)) for v in graph.vertices()
    }
    parent = list(range(graph.n + 1))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    alive = [True] * m

    def delete_edge(ei: int) -> None:
        alive[ei] = False
        for d in (2 * ei, 2 * ei + 1):
            rot[find(tail[d])].remove(d)

    for ei in sorted(to_contract):
        if not alive[ei]:
            continue
        du, dv = 2 * ei, 2 * ei + 1
        u, v = find(tail[du]), find(tail[dv])
        if u == v:
            delete_edge(ei)
            continue
        ru, rv = rot[u], rot[v]
        iu, iv = ru.index(du), rv.index(dv)
        spliced = rv[iv + 1 :] + rv[:iv]
        rot[u] = ru[:iu] + spliced + ru[iu + 1 :]
        del rot[v]
        for d in spliced:
            tail[d] = u
        parent[v] = u
        alive[ei] = False

    if drop_loops:
        for ei in range(m):
            if alive[ei] and find(tail[2 * ei]) == find(tail[2 * ei + 1]):
                delete_edge(ei)

    # renumber surviving vertices and edges consecutively
    survivors = sorted(v for v in graph.vertices() if find(v) == v)
    new_id = {v: i + 1 for i, v in enumerate(survivors)}
    vertex_map = tuple(
        0 if v == 0 else new_id[find(v)] for v in range(graph.n + 1)
    )
    edge_map_l: list[int | None] = [None] * m
    new_edges: list[tuple[int, int, int]] = []
    for ei in range(m):
        if alive[ei]:
            edge_map_l[ei] = len(new_edges)
            u, v, c = graph.edges[ei]
            new_edges.append((vertex_map[u], vertex_map[v], c))

    def remap_dart(d: int) -> int:
        ei = dart_edge(d)
        nd = 2 * edge_map_l[ei] + (d & 1)  # type: ignore[operator]
        return nd

    rot_darts: list[tuple[int, ...]] = [()] * (len(survivors) + 1)
    for v in survivors:
        rot_darts[new_id[v]] = tuple(remap_dart(d) for d in rot[v])

    new_graph = EmbeddedPlanarGraph(
        len(survivors), new_edges, rotation_darts=rot_darts
    )
    return ContractionResult(new_graph, vertex_map, tuple(edge_map_l))


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalizedInstance:
    graph: EmbeddedPlanarGraph
    guess_edge: int
    guess_pair: tuple[int, int]
    vertex_map: tuple[int, ...]
    edge_map: tuple[int | None, ...]
    cost_unit: Fraction
    demand_unit: Fraction

    def lift_side(self, U: Iterable[int]) -> frozenset[int]:
        """Original vertices whose image lies in the normalized side ``U``."""
        side = set(U)
        return frozenset(
            v for v in range(1, len(self.vertex_map)) if self.vertex_map[v] in side
        )


def identity_instance(graph: EmbeddedPlanarGraph) -> NormalizedInstance:
    """Wrap a graph already in range as its own normalization.

    Guess fields carry the sentinels ``-1`` and ``(0, 0)``: no edge was
    guessed and no pair anchored the scaling.
    """
    return NormalizedInstance(
        graph=graph,
        guess_edge=-1,
        guess_pair=(0, 0),
        vertex_map=tuple(range(graph.n + 1)),
        edge_map=tuple(range(len(graph.edges))),
        cost_unit=Fraction(1),
        demand_unit=Fraction(1),
    )


def _scaled_costs(
    edges: list[tuple[int, int, int]], guess_cost: int, n: int
) -> list[tuple[int, int, int]]:
    if guess_cost == 0:
        # every positive edge was contracted away; all costs are zero already
        return edges
    unit = Fraction(guess_cost, n * n)
    out = []
    for u, v, c in edges:
        scaled = -((-c * n * n) // guess_cost)  # ceil(c / unit)
        assert 0 <= scaled <= n * n and Fraction(scaled) * unit >= c
        out.append((u, v, scaled))
    return out


def normalize(
    graph: EmbeddedPlanarGraph,
    guess_edge: int,
    guess_pair: tuple[int, int],
    *,
    n_ref: int | None = None,
) -> NormalizedInstance:
    """Rewrite the instance under the guess ``(guess_edge, guess_pair)``.

    Raises :class:`PreconditionViolated` when the guess is structurally dead
    (pair endpoints merge, or the graph collapses) and :class:`NoDemand` when
    no demand survives; callers iterating over guesses should skip those.
    """
    n = graph.n if n_ref is None else n_ref
    s, t = guess_pair
    key = (s, t) if s <= t else (t, s)
    if key not in graph.demands:
        raise PreconditionViolated(f"guess pair {key} carries no demand")
    guess_cost = graph.edges[guess_edge].cost

    contracted = contract_edges(
        graph,
        [i for i, e in enumerate(graph.edges) if e.cost > guess_cost],
    )
    g2, vmap, emap = contracted.graph, contracted.vertex_map, contracted.edge_map
    if g2.n < 2:
        raise PreconditionViolated("contraction collapsed the graph")

    # aggregate demands along the contraction
    agg: dict[tuple[int, int], int] = {}
    for (a, b), d in graph.demands.items():
        ia, ib = vmap[a], vmap[b]
        if ia == ib:
            continue
        k = (ia, ib) if ia <= ib else (ib, ia)
        agg[k] = agg.get(k, 0) + d
    is_, it_ = vmap[s], vmap[t]
    if is_ == it_:
        raise PreconditionViolated("guess pair endpoints were merged")
    pkey = (is_, it_) if is_ <= it_ else (it_, is_)
    guess_demand = agg[pkey]

    n3 = n**3
    demands: dict[tuple[int, int], int] = {}
    for k, d in agg.items():
        if d > guess_demand:
            continue
        scaled = d * n3 // guess_demand
        assert 0 <= scaled <= n3
        if scaled > 0:
            demands[k] = scaled
    if not demands:
        raise NoDemand("no demand survives the guess")

    edges = _scaled_costs([tuple(e) for e in g2.edges], guess_cost, n)
    rot_darts = [g2.rotation_at(v) if v >= 1 else () for v in range(g2.n + 1)]
    norm_graph = EmbeddedPlanarGraph(
        g2.n, edges, demands=demands, rotation_darts=rot_darts
    )
    cost_unit = (
        Fraction(guess_cost, n * n) if guess_cost else Fraction(1)
    )
    return NormalizedInstance(
        graph=norm_graph,
        guess_edge=guess_edge,
        guess_pair=key,
        vertex_map=vmap,
        edge_map=emap,
        cost_unit=cost_unit,
        demand_unit=Fraction(guess_demand, n3),
    )


def guesses(graph: EmbeddedPlanarGraph) -> Iterator[tuple[int, tuple[int, int]]]:
    """All (edge id, demand pair) guesses, in deterministic order."""
    for ei in range(len(graph.edges)):
        for pair, _ in graph.demand_pairs():
            yield ei, pair


def quality_ratio_bound(n: int) -> Fraction:
    """Worst-case sparsity inflation of a correct guess's normalization."""
    return (1 + Fraction(3, n)) / (1 - Fraction(1, n))
