"""Instance files and seeded instance generation.

An instance on disk is one JSON document with exactly four fields:

* ``n``: the number of vertices, ids ``1..n``;
* ``edges``: a list of ``[u, v, cost]`` triples with integer costs;
* ``rotation``: an object mapping every vertex (as a string key, JSON has
  no integer keys) to the cyclic order of its incident edge indices, a
  self-loop listed twice;
* ``demands``: a list of ``[u, v, d]`` triples, each unordered pair at
  most once.

Unknown fields are rejected rather than ignored, so a typo in a
hand-written file fails loudly instead of silently changing the
instance.  Reading validates the embedding the same way the constructor
does: connectivity, rotation consistency and the Euler count.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import GraphFormatError, InvalidParams
from .families import grid_graph, wheel_graph
from .planar import EmbeddedPlanarGraph
from .rng import derive

__all__ = [
    "FAMILIES",
    "parse_instance",
    "read_instance",
    "instance_text",
    "write_instance",
    "generate_instance",
]

FAMILIES = ("grid", "wheel", "random")

_FIELDS = ("n", "edges", "rotation", "demands")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def instance_text(graph: EmbeddedPlanarGraph) -> str:
    """Serialize; the output is canonical, so equal graphs give equal bytes."""
    doc = {
        "n": graph.n,
        "edges": [[u, v, c] for u, v, c in graph.edges],
        "rotation": {str(v): list(graph.rotation_of(v)) for v in graph.vertices()},
        "demands": [[u, v, d] for (u, v), d in sorted(graph.demands.items())],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_instance(graph: EmbeddedPlanarGraph, path: str | Path) -> None:
    Path(path).write_text(instance_text(graph))


def _int_triples(raw: object, what: str) -> list[tuple[int, int, int]]:
    if not isinstance(raw, list):
        raise GraphFormatError(f"{what} must be a list of [a, b, value] triples")
    out = []
    for item in raw:
        if (
            not isinstance(item, list)
            or len(item) != 3
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)
        ):
            raise GraphFormatError(f"bad {what} entry: {item!r}")
        out.append((item[0], item[1], item[2]))
    return out


def parse_instance(text: str) -> EmbeddedPlanarGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"instance is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise GraphFormatError("instance must be a JSON object")
    unknown = sorted(set(doc) - set(_FIELDS))
    if unknown:
        raise GraphFormatError(f"unknown instance fields: {', '.join(unknown)}")
    missing = sorted(set(_FIELDS) - set(doc))
    if missing:
        raise GraphFormatError(f"missing instance fields: {', '.join(missing)}")

    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise GraphFormatError(f"n must be an integer, got {n!r}")
    edges = _int_triples(doc["edges"], "edges")

    raw_rot = doc["rotation"]
    if not isinstance(raw_rot, dict):
        raise GraphFormatError("rotation must be an object keyed by vertex")
    rotation: dict[int, list[int]] = {}
    for key, order in raw_rot.items():
        try:
            v = int(key)
        except ValueError:
            raise GraphFormatError(f"rotation key is not a vertex: {key!r}") from None
        if not isinstance(order, list) or not all(
            isinstance(e, int) and not isinstance(e, bool) for e in order
        ):
            raise GraphFormatError(f"rotation of {key} must list edge indices")
        rotation[v] = order

    demands: dict[tuple[int, int], int] = {}
    for u, v, d in _int_triples(doc["demands"], "demands"):
        pair = (u, v) if u <= v else (v, u)
        if pair in demands:
            raise GraphFormatError(f"demand pair {pair} appears twice")
        demands[pair] = d

    return EmbeddedPlanarGraph(n, edges, rotation=rotation, demands=demands)


def read_instance(path: str | Path) -> EmbeddedPlanarGraph:
    p = Path(path)
    if not p.is_file():
        raise GraphFormatError(f"no instance file at {p}")
    return parse_instance(p.read_text())


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------


def _delete_edges(graph: EmbeddedPlanarGraph, kill: set[int]) -> EmbeddedPlanarGraph:
    keep = [i for i in range(len(graph.edges)) if i not in kill]
    remap = {old: new for new, old in enumerate(keep)}
    edges = [tuple(graph.edges[i]) for i in keep]
    rotation = {
        v: [remap[e] for e in graph.rotation_of(v) if e in remap]
        for v in graph.vertices()
    }
    return EmbeddedPlanarGraph(graph.n, edges, rotation=rotation)


def _connected_without(graph: EmbeddedPlanarGraph, kill: set[int]) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in graph.vertices()}
    for i, (u, v, _) in enumerate(graph.edges):
        if i not in kill:
            adj[u].append(v)
            adj[v].append(u)
    seen = {1}
    stack = [1]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == graph.n


def generate_instance(
    family: str,
    *,
    rows: int = 3,
    cols: int = 3,
    rim: int = 5,
    deletions: int = 2,
    cost_max: int = 5,
    demand_pairs: int = 2,
    demand_max: int = 3,
    seed: int = 0,
) -> EmbeddedPlanarGraph:
    """Build a named family member with seeded costs and demands.

    ``grid`` is a ``rows x cols`` grid, ``wheel`` a hub joined to a
    ``rim``-cycle, and ``random`` starts from the grid and deletes up to
    ``deletions`` uniformly chosen edges, skipping any whose removal
    would disconnect the graph.  Costs are uniform on ``1..cost_max``
    and each demand pair gets a value uniform on ``1..demand_max``.
    """
    if family not in FAMILIES:
        raise InvalidParams(f"unknown family {family!r}; pick one of {FAMILIES}")
    if cost_max < 1 or demand_max < 1 or demand_pairs < 0 or deletions < 0:
        raise InvalidParams("cost-max and demand-max must be at least 1, counts at least 0")

    rng = derive(seed, "generate", family)
    if family == "wheel":
        if rim < 3:
            raise InvalidParams("a wheel needs a rim of at least 3")
        base = wheel_graph(rim)
    else:
        if rows < 1 or cols < 1 or rows * cols < 2:
            raise InvalidParams("a grid needs at least two vertices")
        base = grid_graph(rows, cols)

    if family == "random":
        kill: set[int] = set()
        for ei in rng.permutation(len(base.edges)):
            if len(kill) == deletions:
                break
            if _connected_without(base, kill | {int(ei)}):
                kill.add(int(ei))
        base = _delete_edges(base, kill)

    costs = [int(c) for c in rng.integers(1, cost_max + 1, size=len(base.edges))]
    edges = [(u, v, costs[i]) for i, (u, v, _) in enumerate(base.edges)]

    all_pairs = [
        (u, v) for u in base.vertices() for v in base.vertices() if u < v
    ]
    if demand_pairs > len(all_pairs):
        raise InvalidParams(
            f"asked for {demand_pairs} demand pairs, only {len(all_pairs)} exist"
        )
    picked = rng.choice(len(all_pairs), size=demand_pairs, replace=False)
    demands = {
        all_pairs[int(i)]: int(rng.integers(1, demand_max + 1)) for i in sorted(picked)
    }

    rotation = {v: list(base.rotation_of(v)) for v in base.vertices()}
    return EmbeddedPlanarGraph(base.n, edges, rotation=rotation, demands=demands)
