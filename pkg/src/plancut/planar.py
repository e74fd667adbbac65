"""Embedded planar graphs, their duals, and the cut/cycle correspondence.

A graph is given combinatorially: vertices ``1..n``, an edge list (parallel
edges and self-loops allowed), and a rotation system listing the cyclic order
of edge-ends around every vertex.  Faces are traced from the rotation system
and the Euler identity ``V - E + F == 2`` certifies that the data describes a
genus-zero embedding.

The dual exchanges vertices and faces while keeping edge indices and costs.
Simple cuts of the primal (both sides connected) correspond to simple cycles
of the dual; the side of a cut not containing the designated vertex
``f_infinity`` is the set of faces enclosed by the cycle.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    DisconnectedGraph,
    GraphFormatError,
    NotPlanarEmbedding,
    NotSimpleCut,
    NotSimpleCycle,
    PreconditionViolated,
)

__all__ = [
    "Edge",
    "EmbeddedPlanarGraph",
    "DualGraph",
    "DualCycle",
    "ClosedWalk",
    "CutResult",
    "dual_graph",
    "cut_edges",
    "cut_result",
    "is_simple_cut",
    "cut_to_cycle",
    "cycle_to_cut",
    "sparsity",
    "simplify_cut",
    "check_separation_cover",
    "select_sparse_cycle",
]


class Edge(NamedTuple):
    u: int
    v: int
    cost: int


# ---------------------------------------------------------------------------
# dart helpers: edge i owns darts 2i (u -> v) and 2i + 1 (v -> u)
# ---------------------------------------------------------------------------


def dart_edge(d: int) -> int:
    return d >> 1


def dart_rev(d: int) -> int:
    return d ^ 1


def _normalize_pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


class EmbeddedPlanarGraph:
    """A connected multigraph with a genus-zero rotation system.

    Parameters
    ----------
    n:
        Number of vertices; vertex ids are ``1..n``.
    edges:
        Sequence of ``(u, v, cost)`` with nonnegative integer costs.
    rotation:
        For each vertex, the cyclic order of incident edge indices.  A
        self-loop appears twice in its vertex's list; the first occurrence is
        taken as the ``u -> v`` end.  Dart-level rotations may be supplied via
        ``rotation_darts`` instead (internal use, e.g. by ``dual_graph``).
    demands:
        Mapping from vertex pairs to nonnegative integer demand.
    """

    def __init__(
        self,
        n: int,
        edges: Sequence[tuple[int, int, int]],
        rotation: Mapping[int, Sequence[int]] | Sequence[Sequence[int]] | None = None,
        demands: Mapping[tuple[int, int], int] | None = None,
        *,
        rotation_darts: Sequence[Sequence[int]] | None = None,
    ) -> None:
        if not isinstance(n, int) or n < 1:
            raise GraphFormatError(f"vertex count must be a positive integer, got {n!r}")
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(self._check_edge(e, n) for e in edges)
        self.demands: dict[tuple[int, int], int] = self._check_demands(demands, n)
        if rotation_darts is not None:
            rot = [tuple(r) for r in rotation_darts]
            if len(rot) != n + 1:
                raise GraphFormatError("rotation_darts must have one entry per vertex plus a dummy")
            self._rotation = tuple(rot)
        else:
            self._rotation = self._build_rotation(rotation)
        self._check_rotation()
        self._check_connected()
        self._trace_faces()

    # -- validation ---------------------------------------------------------

    @staticmethod
    def _check_edge(e: tuple[int, int, int], n: int) -> Edge:
        u, v, cost = e
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(f"edge endpoint out of range: {e!r}")
        if not isinstance(cost, int) or cost < 0:
            raise GraphFormatError(f"edge cost must be a nonnegative integer: {e!r}")
        return Edge(u, v, cost)

    @staticmethod
    def _check_demands(
        demands: Mapping[tuple[int, int], int] | None, n: int
    ) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for (u, v), d in (demands or {}).items():
            if not (1 <= u <= n and 1 <= v <= n) or u == v:
                raise GraphFormatError(f"bad demand pair ({u}, {v})")
            if not isinstance(d, int) or d < 0:
                raise GraphFormatError(f"demand must be a nonnegative integer: {d!r}")
            key = _normalize_pair(u, v)
            if key in out:
                raise GraphFormatError(f"duplicate demand pair {key}")
            if d > 0:
                out[key] = d
        return dict(sorted(out.items()))

    def _build_rotation(
        self, rotation: Mapping[int, Sequence[int]] | Sequence[Sequence[int]] | None
    ) -> tuple[tuple[int, ...], ...]:
        if rotation is None:
            raise GraphFormatError("rotation system is required")
        if isinstance(rotation, Mapping):
            per_vertex = {int(v): list(seq) for v, seq in rotation.items()}
        else:
            per_vertex = {v + 1: list(seq) for v, seq in enumerate(rotation)}
        rot: list[tuple[int, ...]] = [()]
        for v in range(1, self.n + 1):
            seen_loop: set[int] = set()
            darts: list[int] = []
            for ei in per_vertex.get(v, []):
                if not (0 <= ei < len(self.edges)):
                    raise GraphFormatError(f"rotation at {v} references unknown edge {ei}")
                u, w, _ = self.edges[ei]
                if u == w == v:
                    # first occurrence of a loop is the forward end
                    d = 2 * ei + (1 if ei in seen_loop else 0)
                    seen_loop.add(ei)
                elif u == v:
                    d = 2 * ei
                elif w == v:
                    d = 2 * ei + 1
                else:
                    raise GraphFormatError(f"rotation at {v} lists non-incident edge {ei}")
                darts.append(d)
            rot.append(tuple(darts))
        return tuple(rot)

    def _check_rotation(self) -> None:
        expected: Counter[int] = Counter()
        for i, (u, v, _) in enumerate(self.edges):
            expected[2 * i] = 1
            expected[2 * i + 1] = 1
        seen: Counter[int] = Counter()
        for v in range(1, self.n + 1):
            for d in self._rotation[v]:
                if self.dart_tail(d) != v:
                    raise GraphFormatError(f"dart {d} listed at vertex {v} but is not an end there")
                seen[d] += 1
        if seen != expected:
            raise GraphFormatError("rotation system does not list every edge-end exactly once")

    def _check_connected(self) -> None:
        if self.n == 1:
            return
        seen = {1}
        queue = deque([1])
        adj = self.adjacency()
        while queue:
            v = queue.popleft()
            for w, _, _ in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != self.n:
            raise DisconnectedGraph(f"graph has {self.n} vertices but only {len(seen)} reachable")

    # -- faces --------------------------------------------------------------

    def _trace_faces(self) -> None:
        m = len(self.edges)
        if m == 0:
            # a single isolated vertex bounds one face
            self.faces: tuple[tuple[int, ...], ...] = ((),)
            self.face_of: tuple[int, ...] = ()
            self.num_faces = 1
            return
        succ = [0] * (2 * m)
        for v in range(1, self.n + 1):
            seq = self._rotation[v]
            for idx, d in enumerate(seq):
                succ[d] = seq[(idx + 1) % len(seq)]
        face_of = [-1] * (2 * m)
        faces: list[tuple[int, ...]] = []
        for start in range(2 * m):
            if face_of[start] >= 0:
                continue
            fid = len(faces)
            orbit = []
            d = start
            while face_of[d] < 0:
                face_of[d] = fid
                orbit.append(d)
                d = succ[dart_rev(d)]
            if d != start:
                raise NotPlanarEmbedding("face traversal did not close into an orbit")
            faces.append(tuple(orbit))
        self.faces = tuple(faces)
        self.face_of = tuple(face_of)
        self.num_faces = len(faces)
        if self.n - m + self.num_faces != 2:
            raise NotPlanarEmbedding(
                f"Euler check failed: V-E+F = {self.n}-{m}+{self.num_faces} != 2"
            )

    # -- basic accessors ----------------------------------------------------

    def dart_tail(self, d: int) -> int:
        e = self.edges[dart_edge(d)]
        return e.u if d & 1 == 0 else e.v

    def dart_head(self, d: int) -> int:
        return self.dart_tail(dart_rev(d))

    def rotation_at(self, v: int) -> tuple[int, ...]:
        return self._rotation[v]

    def adjacency(self) -> list[list[tuple[int, int, int]]]:
        """Per-vertex list of ``(neighbor, edge_index, cost)``, loops skipped."""
        try:
            return self._adj
        except AttributeError:
            adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.n + 1)]
            for i, (u, v, cost) in enumerate(self.edges):
                if u == v:
                    continue
                adj[u].append((v, i, cost))
                adj[v].append((u, i, cost))
            self._adj = adj
            return adj

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def total_demand(self) -> int:
        return sum(self.demands.values())

    def demand_pairs(self) -> list[tuple[tuple[int, int], int]]:
        return sorted(self.demands.items())

    def faces_at(self, v: int) -> frozenset[int]:
        """Ids of faces incident to vertex ``v`` (1-based face ids)."""
        if not self._rotation[v]:
            return frozenset({1})
        return frozenset(self.face_of[d] + 1 for d in self._rotation[v])

    def rotation_of(self, v: int) -> tuple[int, ...]:
        """Cyclic order of incident edge indices around ``v``.

        A self-loop appears twice, matching the constructor's input form,
        so the result feeds straight back into a new graph or a file.
        """
        return tuple(dart_edge(d) for d in self._rotation[v])

    def __repr__(self) -> str:  # pragma: no cover
        return f"EmbeddedPlanarGraph(n={self.n}, m={len(self.edges)}, F={self.num_faces})"


# ---------------------------------------------------------------------------
# cuts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CutResult:
    """A cut given by a vertex side, with exact sparsity."""

    U: frozenset[int]
    edges: frozenset[int]
    cost: int
    demand: int
    sparsity: Fraction | float

    def __str__(self) -> str:
        side = ",".join(str(v) for v in sorted(self.U))
        return f"cut({{{side}}}, cost={self.cost}, demand={self.demand}, sparsity={self.sparsity})"


def cut_edges(graph: EmbeddedPlanarGraph, U: Iterable[int]) -> frozenset[int]:
    side = set(U)
    return frozenset(
        i for i, (u, v, _) in enumerate(graph.edges) if (u in side) != (v in side)
    )


def cut_result(graph: EmbeddedPlanarGraph, U: Iterable[int]) -> CutResult:
    side = frozenset(U)
    eids = cut_edges(graph, side)
    cost = sum(graph.edges[i].cost for i in eids)
    demand = sum(
        d for (a, b), d in graph.demands.items() if (a in side) != (b in side)
    )
    sp: Fraction | float = Fraction(cost, demand) if demand else math.inf
    return CutResult(U=side, edges=eids, cost=cost, demand=demand, sparsity=sp)


def sparsity(graph: EmbeddedPlanarGraph, U: Iterable[int]) -> Fraction | float:
    return cut_result(graph, U).sparsity


def _component_split(
    graph: EmbeddedPlanarGraph, allowed: frozenset[int], banned_edges: frozenset[int]
) -> list[frozenset[int]]:
    """Connected components of ``graph[allowed]`` without ``banned_edges``."""
    adj = graph.adjacency()
    seen: set[int] = set()
    comps: list[frozenset[int]] = []
    for s in sorted(allowed):
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        seen.add(s)
        while queue:
            x = queue.popleft()
            for w, ei, _ in adj[x]:
                if w in allowed and w not in seen and ei not in banned_edges:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def is_simple_cut(graph: EmbeddedPlanarGraph, U: Iterable[int]) -> bool:
    side = frozenset(U)
    other = frozenset(graph.vertices()) - side
    if not side or not other:
        return False
    none = frozenset()
    return (
        len(_component_split(graph, side, none)) == 1
        and len(_component_split(graph, other, none)) == 1
    )


def simplify_cut(graph: EmbeddedPlanarGraph, U: Iterable[int]) -> CutResult:
    """Best connected-component side derived from ``U``.

    Among ``U`` itself and every connected component of either side, returns
    the candidate of minimum sparsity (ties broken by smaller vertex set).
    """
    side = frozenset(U)
    other = frozenset(graph.vertices()) - side
    candidates = [side] if side and other else []
    none = frozenset()
    if side:
        candidates.extend(_component_split(graph, side, none))
    if other:
        candidates.extend(_component_split(graph, other, none))
    if not candidates:
        raise PreconditionViolated("cut side is empty or full")
    best: CutResult | None = None
    for cand in candidates:
        if not cand or len(cand) == graph.n:
            continue
        res = cut_result(graph, cand)
        if best is None or (res.sparsity, len(res.U), sorted(res.U)) < (
            best.sparsity,
            len(best.U),
            sorted(best.U),
        ):
            best = res
    if best is None:
        raise PreconditionViolated("no proper cut candidate found")
    return best


# ---------------------------------------------------------------------------
# dual graph
# ---------------------------------------------------------------------------


class DualGraph:
    """Dual of an embedded planar graph.

    Vertices are the faces of the primal (ids ``1..F``); edge ``i`` of the
    dual crosses edge ``i`` of the primal and keeps its cost.  Faces of the
    dual correspond to primal vertices; ``f_infinity`` is the primal vertex
    whose dual face plays the role of the infinite one, fixing which side of
    a cycle counts as enclosed.
    """

    def __init__(self, primal: EmbeddedPlanarGraph, f_infinity: int | None = None) -> None:
        self.primal = primal
        if f_infinity is None:
            f_infinity = 1
        if not (1 <= f_infinity <= primal.n):
            raise GraphFormatError(f"f_infinity must be a primal vertex, got {f_infinity}")
        self.f_infinity = f_infinity
        m = len(primal.edges)
        dual_edges = [
            (primal.face_of[2 * i] + 1, primal.face_of[2 * i + 1] + 1, primal.edges[i].cost)
            for i in range(m)
        ]
        rot_darts: list[tuple[int, ...]] = [()]
        for fid in range(primal.num_faces):
            rot_darts.append(tuple(primal.faces[fid]))
        self.graph = EmbeddedPlanarGraph(
            primal.num_faces, dual_edges, rotation_darts=tuple(rot_darts)
        )
        if self.graph.num_faces != primal.n:
            raise NotPlanarEmbedding("dual face count does not match primal vertex count")
        self.face_demands = dict(primal.demands)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    def face_vertices(self, primal_vertex: int) -> frozenset[int]:
        """Dual vertices incident to the dual face of ``primal_vertex``."""
        return self.primal.faces_at(primal_vertex)

    def all_faces(self) -> range:
        """Dual faces are primal vertices ``1..n``."""
        return self.primal.vertices()

    def enclosed_faces(self, edge_set: Iterable[int]) -> frozenset[int]:
        """Primal-vertex side of the cut ``edge_set`` not containing f_infinity.

        Raises :class:`NotSimpleCut` if removing the edges does not split the
        primal into exactly two connected pieces matching the edge set.
        """
        eids = frozenset(edge_set)
        allv = frozenset(self.primal.vertices())
        comps = _component_split(self.primal, allv, eids)
        if len(comps) != 2:
            raise NotSimpleCut(f"cut splits primal into {len(comps)} components, expected 2")
        inside = comps[0] if self.f_infinity in comps[1] else comps[1]
        if cut_edges(self.primal, inside) != eids:
            raise NotSimpleCut("edge set is not the full boundary of its side")
        return inside

    def two_coloring(self, odd_edges: frozenset[int]) -> dict[int, int]:
        """Parity coloring of primal vertices relative to ``odd_edges``.

        The color of a vertex is the parity of odd edges along any path from
        ``f_infinity``; consistent iff ``odd_edges`` lies in the primal cut
        space (always true for odd sets of closed dual walks).
        """
        color = {self.f_infinity: 0}
        queue = deque([self.f_infinity])
        adj = self.primal.adjacency()
        while queue:
            x = queue.popleft()
            for w, ei, _ in adj[x]:
                c = color[x] ^ (1 if ei in odd_edges else 0)
                if w not in color:
                    color[w] = c
                    queue.append(w)
                elif color[w] != c:
                    raise NotSimpleCut("odd edge set is not a cut of the primal")
        return color

    def __repr__(self) -> str:  # pragma: no cover
        return f"DualGraph(V*={self.n}, E={len(self.edges)}, f_inf={self.f_infinity})"


def dual_graph(primal: EmbeddedPlanarGraph, f_infinity: int | None = None) -> DualGraph:
    return DualGraph(primal, f_infinity)


# ---------------------------------------------------------------------------
# dual cycles and closed walks
# ---------------------------------------------------------------------------


class DualCycle:
    """A simple cycle in the dual, with its enclosed face set.

    Length-1 cycles are self-loops (duals of primal bridges) and length-2
    cycles must use two distinct parallel edges.
    """

    def __init__(self, dual: DualGraph, edge_seq: Sequence[int]) -> None:
        self.dual = dual
        self.edges: tuple[int, ...] = tuple(edge_seq)
        self.key: frozenset[int] = frozenset(self.edges)
        self._validate()
        self.inside: frozenset[int] = dual.enclosed_faces(self.key)
        self.cost: int = sum(dual.edges[i].cost for i in self.edges)

    def _validate(self) -> None:
        seq = self.edges
        g = self.dual.graph
        if len(seq) == 0:
            raise NotSimpleCycle("empty edge sequence")
        if len(set(seq)) != len(seq):
            raise NotSimpleCycle("repeated edge in cycle")
        if len(seq) == 1:
            u, v, _ = g.edges[seq[0]]
            if u != v:
                raise NotSimpleCycle("length-1 cycle must be a self-loop")
            self.vertices = (u,)
            return
        ends = [frozenset({g.edges[i].u, g.edges[i].v}) for i in seq]
        if len(seq) == 2:
            if ends[0] != ends[1] or len(ends[0]) != 2:
                raise NotSimpleCycle("length-2 cycle needs two distinct parallel edges")
            u, v, _ = g.edges[seq[0]]
            self.vertices = (u, v)
            return
        # walk the sequence, picking the shared endpoint of consecutive edges
        verts: list[int] = []
        for i in range(len(seq)):
            shared = ends[i] & ends[(i + 1) % len(seq)]
            if len(shared) != 1:
                raise NotSimpleCycle("consecutive edges do not share a unique endpoint")
            verts.append(next(iter(shared)))
        if len(set(verts)) != len(verts):
            raise NotSimpleCycle("repeated vertex in cycle")
        for i in range(len(seq)):
            if {verts[i - 1], verts[i]} != set(ends[i]):
                raise NotSimpleCycle("edge sequence is not a closed walk")
        self.vertices = tuple(verts)

    @classmethod
    def from_edge_set(cls, dual: DualGraph, edge_set: Iterable[int]) -> "DualCycle":
        """Order an unordered simple-cycle edge set into a DualCycle."""
        eids = sorted(set(edge_set))
        if not eids:
            raise NotSimpleCycle("empty edge set")
        g = dual.graph
        if len(eids) == 1:
            return cls(dual, eids)
        incident: dict[int, list[int]] = {}
        for i in eids:
            u, v, _ = g.edges[i]
            if u == v:
                raise NotSimpleCycle("self-loop cannot be part of a longer cycle")
            incident.setdefault(u, []).append(i)
            incident.setdefault(v, []).append(i)
        for v, lst in incident.items():
            if len(lst) != 2:
                raise NotSimpleCycle(f"vertex {v} has degree {len(lst)} in edge set")
        start = eids[0]
        seq = [start]
        u, v, _ = g.edges[start]
        prev, cur = u, v
        while cur != u or len(seq) < len(eids):
            nxt_edge = None
            for i in incident[cur]:
                if i != seq[-1]:
                    nxt_edge = i
                    break
            if nxt_edge is None or nxt_edge in seq:
                if cur == u and len(seq) == len(eids):
                    break
                raise NotSimpleCycle("edge set is not a single cycle")
            seq.append(nxt_edge)
            a, b, _ = g.edges[nxt_edge]
            prev, cur = cur, (b if a == cur else a)
        if len(seq) != len(eids) or cur != u:
            raise NotSimpleCycle("edge set is not a single cycle")
        return cls(dual, seq)

    def to_walk(self) -> "ClosedWalk":
        g = self.dual.graph
        if len(self.edges) == 1:
            return ClosedWalk(self.dual, (2 * self.edges[0],))
        darts: list[int] = []
        # vertices[i] is the endpoint shared by edges[i] and edges[i+1]
        for i, ei in enumerate(self.edges):
            head = self.vertices[i]
            d = 2 * ei
            if g.dart_head(d) != head:
                d = dart_rev(d)
            if g.dart_head(d) != head:
                raise NotSimpleCycle("cycle orientation broke down")
            darts.append(d)
        return ClosedWalk(self.dual, tuple(darts))

    def __repr__(self) -> str:  # pragma: no cover
        return f"DualCycle(edges={self.edges}, inside={sorted(self.inside)})"


class ClosedWalk:
    """A closed walk in the dual, possibly repeating vertices and edges.

    The edges used an odd number of times form a primal cut; ``side()`` is
    the induced primal-vertex side away from ``f_infinity``.  Patched cycles
    are closed walks, so the verification harness works at this generality.
    """

    def __init__(self, dual: DualGraph, darts: Sequence[int]) -> None:
        self.dual = dual
        self.darts: tuple[int, ...] = tuple(darts)
        if not self.darts:
            raise NotSimpleCycle("empty walk")
        g = dual.graph
        for i, d in enumerate(self.darts):
            nxt = self.darts[(i + 1) % len(self.darts)]
            if g.dart_head(d) != g.dart_tail(nxt):
                raise NotSimpleCycle("darts do not concatenate into a closed walk")
        self.edge_multiplicity: Counter[int] = Counter(dart_edge(d) for d in self.darts)
        self.odd_edges: frozenset[int] = frozenset(
            e for e, k in self.edge_multiplicity.items() if k % 2 == 1
        )
        self.cost: int = sum(g.edges[dart_edge(d)].cost for d in self.darts)

    def vertex_seq(self) -> tuple[int, ...]:
        g = self.dual.graph
        return tuple(g.dart_tail(d) for d in self.darts)

    def side(self) -> frozenset[int]:
        color = self.dual.two_coloring(self.odd_edges)
        return frozenset(v for v, c in color.items() if c == 1)

    def separates(self, a: int, b: int) -> bool:
        s = self.side()
        return (a in s) != (b in s)

    def cut(self) -> CutResult:
        """Exact cut induced by the odd edge set (may be non-simple)."""
        return cut_result(self.dual.primal, self.side())

    def __repr__(self) -> str:  # pragma: no cover
        return f"ClosedWalk(len={len(self.darts)}, odd={sorted(self.odd_edges)})"


WalkLike = DualCycle | ClosedWalk


def _as_walk(c: WalkLike) -> ClosedWalk:
    return c.to_walk() if isinstance(c, DualCycle) else c


# ---------------------------------------------------------------------------
# cut <-> cycle bijection
# ---------------------------------------------------------------------------


def cut_to_cycle(dual: DualGraph, U: Iterable[int]) -> DualCycle:
    """Simple cut side ``U`` of the primal to the matching simple dual cycle."""
    side = frozenset(U)
    if not is_simple_cut(dual.primal, side):
        raise NotSimpleCut(f"{sorted(side)} is not a simple cut side")
    eids = cut_edges(dual.primal, side)
    cyc = DualCycle.from_edge_set(dual, eids)
    if cyc.inside not in (side, frozenset(dual.primal.vertices()) - side):
        raise NotSimpleCut("cycle encloses neither side of the cut")
    return cyc


def cycle_to_cut(cycle: DualCycle) -> CutResult:
    """Cut of the primal whose edge set is the cycle's, sides both connected."""
    res = cut_result(cycle.dual.primal, cycle.inside)
    if res.edges != cycle.key:
        raise NotSimpleCut("enclosed side does not reproduce the cycle's edges")
    return res


# ---------------------------------------------------------------------------
# separation cover and sparse-cycle selection
# ---------------------------------------------------------------------------


def _parity_matches(base: WalkLike, others: Sequence[WalkLike]) -> bool:
    acc: Counter[int] = Counter()
    for c in others:
        w = _as_walk(c)
        for e, k in w.edge_multiplicity.items():
            acc[e] += k
    base_mult = _as_walk(base).edge_multiplicity
    all_edges = set(acc) | set(base_mult)
    return all(acc.get(e, 0) % 2 == base_mult.get(e, 0) % 2 for e in all_edges)


def check_separation_cover(
    base: WalkLike,
    others: Sequence[WalkLike],
    *,
    check_parity: bool = False,
) -> bool:
    """Does every demand pair separated by ``base`` get separated by some other?

    With ``check_parity`` the parity premise (every edge appears an odd number
    of times across ``others`` iff it does so in ``base``) is verified too.
    """
    dual = base.dual if isinstance(base, DualCycle) else base.dual
    if check_parity and not _parity_matches(base, others):
        return False
    base_side = _as_walk(base).side()
    sides = [_as_walk(c).side() for c in others]
    for (a, b), d in dual.face_demands.items():
        if d <= 0:
            continue
        if (a in base_side) != (b in base_side):
            if not any((a in s) != (b in s) for s in sides):
                return False
    return True


def select_sparse_cycle(
    base: DualCycle,
    others: Sequence[WalkLike],
    eps: Fraction | float,
) -> tuple[int, CutResult]:
    """Pick a replacement cycle of sparsity at most ``(1+eps)`` times base's.

    Preconditions (verified): the others jointly separate every demand pair
    separated by ``base`` and their total cost is at most ``(1+eps)`` times
    the base cost.  Returns ``(index, cut)`` of the sparsest candidate.
    """
    if not others:
        raise PreconditionViolated("no candidate cycles")
    if not check_separation_cover(base, others):
        raise PreconditionViolated("candidates do not cover the separated demand")
    total = sum(_as_walk(c).cost for c in others)
    budget = (1 + Fraction(eps)) * base.cost
    if total > budget:
        raise PreconditionViolated(f"total candidate cost {total} exceeds budget {budget}")
    base_cut = cut_result(base.dual.primal, base.inside)
    best_i, best = -1, None
    for i, c in enumerate(others):
        res = _as_walk(c).cut()
        if best is None or res.sparsity < best.sparsity:
            best_i, best = i, res
    assert best is not None
    if base_cut.sparsity != math.inf:
        bound = (1 + Fraction(eps)) * base_cut.sparsity
        if not (best.sparsity <= bound):
            raise PreconditionViolated(
                f"no candidate within (1+eps) of base sparsity: {best.sparsity} > {bound}"
            )
    return best_i, best
