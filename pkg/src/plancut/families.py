"""Named graph families with known embeddings.

Most families are built from straight-line drawings: the rotation at a vertex
is the counterclockwise angular order of its incident edges, which yields a
valid genus-zero rotation system whenever the drawing has no crossings.  The
constructor's Euler check certifies every fixture at build time.  Multigraph
families (parallel edges, self-loops) carry explicit rotations instead.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

from .planar import EmbeddedPlanarGraph

__all__ = [
    "embed_from_coordinates",
    "with_demands",
    "path_graph",
    "cycle_graph",
    "star_graph",
    "grid_graph",
    "wheel_graph",
    "k4",
    "stellated_pair",
    "theta_graph",
    "triangle_with_pendant",
    "triangle_with_loop",
    "k4_minus_edge",
    "bowtie",
    "house",
    "duality_fixture_set",
]


def _edge_costs(m: int, costs: int | Sequence[int]) -> list[int]:
    if isinstance(costs, int):
        return [costs] * m
    out = list(costs)
    if len(out) != m:
        raise ValueError(f"expected {m} costs, got {len(out)}")
    return out


def embed_from_coordinates(
    coords: Mapping[int, tuple[float, float]],
    edges: Sequence[tuple[int, int]],
    costs: int | Sequence[int] = 1,
    demands: Mapping[tuple[int, int], int] | None = None,
) -> EmbeddedPlanarGraph:
    """Embedded graph from a non-crossing straight-line drawing."""
    n = len(coords)
    cs = _edge_costs(len(edges), costs)
    elist = [(u, v, c) for (u, v), c in zip(edges, cs)]
    rotation: dict[int, list[int]] = {v: [] for v in coords}
    for v in coords:
        x0, y0 = coords[v]
        incident: list[tuple[float, int]] = []
        for i, (a, b) in enumerate(edges):
            if v not in (a, b) or a == b:
                continue
            w = b if a == v else a
            x1, y1 = coords[w]
            incident.append((math.atan2(y1 - y0, x1 - x0), i))
        rotation[v] = [i for _, i in sorted(incident)]
    return EmbeddedPlanarGraph(n, elist, rotation, demands)


def with_demands(
    graph: EmbeddedPlanarGraph, demands: Mapping[tuple[int, int], int]
) -> EmbeddedPlanarGraph:
    """Copy of ``graph`` with the given demands."""
    rot = [graph.rotation_at(v) if v >= 1 else () for v in range(graph.n + 1)]
    return EmbeddedPlanarGraph(
        graph.n, graph.edges, demands=demands, rotation_darts=rot
    )


# ---------------------------------------------------------------------------
# simple families
# ---------------------------------------------------------------------------


def path_graph(k: int, costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    cs = _edge_costs(k - 1, costs)
    edges = [(i, i + 1, cs[i - 1]) for i in range(1, k)]
    rotation = {v: sorted(i for i, (a, b, _) in enumerate(edges) if v in (a, b)) for v in range(1, k + 1)}
    return EmbeddedPlanarGraph(k, edges, rotation)


def cycle_graph(k: int, costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    cs = _edge_costs(k, costs)
    edges = [(i, i % k + 1, cs[i - 1]) for i in range(1, k + 1)]
    rotation = {v: sorted(i for i, (a, b, _) in enumerate(edges) if v in (a, b)) for v in range(1, k + 1)}
    return EmbeddedPlanarGraph(k, edges, rotation)


def star_graph(leaves: int, costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    cs = _edge_costs(leaves, costs)
    edges = [(1, 2 + i, cs[i]) for i in range(leaves)]
    rotation = {1: list(range(leaves))}
    for i in range(leaves):
        rotation[2 + i] = [i]
    return EmbeddedPlanarGraph(leaves + 1, edges, rotation)


def grid_graph(rows: int, cols: int, costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    """rows x cols grid, vertices row-major starting at 1."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError("grid needs at least two vertices")
    coords = {i * cols + j + 1: (float(j), float(-i)) for i in range(rows) for j in range(cols)}
    edges: list[tuple[int, int]] = []
    for i in range(rows):
        for j in range(cols - 1):
            edges.append((i * cols + j + 1, i * cols + j + 2))
    for i in range(rows - 1):
        for j in range(cols):
            edges.append((i * cols + j + 1, (i + 1) * cols + j + 1))
    return embed_from_coordinates(coords, edges, costs)


def wheel_graph(rim: int, costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    """Hub vertex 1 joined to a rim cycle 2..rim+1."""
    if rim < 3:
        raise ValueError("wheel needs a rim of length at least 3")
    coords = {1: (0.0, 0.0)}
    for j in range(rim):
        ang = 2 * math.pi * j / rim
        coords[2 + j] = (math.cos(ang), math.sin(ang))
    edges = [(1, 2 + j) for j in range(rim)]
    edges += [(2 + j, 2 + (j + 1) % rim) for j in range(rim)]
    return embed_from_coordinates(coords, edges, costs)


def k4(costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    return wheel_graph(3, costs)


def stellated_pair(
    costs: int | Sequence[int] = 1,
    demands: Mapping[tuple[int, int], int] | None = None,
) -> EmbeddedPlanarGraph:
    """Two stellated triangles (hubs 7 and 8) joined by the edge (1, 4).

    The hubs are interior vertices whose incident face sets are disjoint, so
    a demand between them can be resolved in different branches of a
    hierarchical decomposition.  Grids and wheels this small never manage
    that: every far-apart vertex pair shares the outer face.
    """
    coords = {
        1: (0.0, 2.0),
        2: (-1.5, -1.0),
        3: (1.5, -1.0),
        7: (0.0, 0.0),
        4: (5.0, 2.0),
        5: (3.5, -1.0),
        6: (6.5, -1.0),
        8: (5.0, 0.0),
    }
    edges = [
        (1, 2), (2, 3), (3, 1), (7, 1), (7, 2), (7, 3),
        (4, 5), (5, 6), (6, 4), (8, 4), (8, 5), (8, 6),
        (1, 4),
    ]
    return embed_from_coordinates(coords, edges, costs, demands)


# ---------------------------------------------------------------------------
# multigraph and mixed families (explicit rotations)
# ---------------------------------------------------------------------------


def theta_graph(strands: int, costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    """Two vertices joined by ``strands`` parallel edges."""
    if strands < 2:
        raise ValueError("theta graph needs at least two strands")
    cs = _edge_costs(strands, costs)
    edges = [(1, 2, cs[i]) for i in range(strands)]
    rotation = {1: list(range(strands)), 2: list(reversed(range(strands)))}
    return EmbeddedPlanarGraph(2, edges, rotation)


def triangle_with_pendant(costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    coords = {1: (0.0, 0.0), 2: (2.0, 0.0), 3: (1.0, 1.0), 4: (1.0, -1.0)}
    edges = [(1, 2), (2, 3), (3, 1), (1, 4)]
    return embed_from_coordinates(coords, edges, costs)


def triangle_with_loop(costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    """Triangle plus a self-loop petal at vertex 3."""
    cs = _edge_costs(4, costs)
    edges = [(1, 2, cs[0]), (2, 3, cs[1]), (3, 1, cs[2]), (3, 3, cs[3])]
    rotation = {1: [0, 2], 2: [0, 1], 3: [1, 3, 3, 2]}
    return EmbeddedPlanarGraph(3, edges, rotation)


def k4_minus_edge(costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    coords = {1: (1.0, 1.0), 2: (0.0, 0.0), 3: (2.0, 0.0), 4: (1.0, -1.0)}
    edges = [(1, 2), (2, 3), (3, 1), (2, 4), (4, 3)]
    return embed_from_coordinates(coords, edges, costs)


def bowtie(costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    coords = {
        1: (0.0, 0.0),
        2: (-2.0, 1.0),
        3: (-2.0, -1.0),
        4: (2.0, 1.0),
        5: (2.0, -1.0),
    }
    edges = [(1, 2), (2, 3), (3, 1), (1, 4), (4, 5), (5, 1)]
    return embed_from_coordinates(coords, edges, costs)


def house(costs: int | Sequence[int] = 1) -> EmbeddedPlanarGraph:
    coords = {
        1: (0.0, 0.0),
        2: (1.0, 0.0),
        3: (1.0, 1.0),
        4: (0.0, 1.0),
        5: (0.5, 1.5),
    }
    edges = [(1, 2), (2, 3), (3, 4), (4, 1), (3, 5), (5, 4)]
    return embed_from_coordinates(coords, edges, costs)


# ---------------------------------------------------------------------------
# curated fixture set
# ---------------------------------------------------------------------------


def duality_fixture_set(max_edges: int = 8) -> list[tuple[str, EmbeddedPlanarGraph]]:
    """Curated connected planar fixtures with at most ``max_edges`` edges.

    Mixes trees, cycles, bridges, cut vertices, parallel edges, a self-loop
    and dense-as-planar graphs; used by the exhaustive duality checks.
    """
    items: list[tuple[str, EmbeddedPlanarGraph]] = [
        ("edge", path_graph(2)),
        ("path3", path_graph(3)),
        ("path5", path_graph(5)),
        ("star4", star_graph(4)),
        ("triangle", cycle_graph(3)),
        ("square", cycle_graph(4)),
        ("square-costs", cycle_graph(4, costs=[1, 2, 3, 4])),
        ("c6", cycle_graph(6)),
        ("c8", cycle_graph(8)),
        ("theta3", theta_graph(3)),
        ("theta4", theta_graph(4, costs=[1, 3, 2, 5])),
        ("triangle-pendant", triangle_with_pendant()),
        ("triangle-loop", triangle_with_loop()),
        ("k4-minus-edge", k4_minus_edge()),
        ("k4", k4()),
        ("k4-costs", k4(costs=[2, 1, 4, 1, 3, 2])),
        ("bowtie", bowtie()),
        ("house", house()),
        ("grid2x3", grid_graph(2, 3)),
        ("wheel4", wheel_graph(4)),
    ]
    return [(name, g) for name, g in items if len(g.edges) <= max_edges]
