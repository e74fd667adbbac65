"""Cycle patching and the replay harness that certifies the tree's promises.

``patch`` splits a cycle whose cost inside a cluster is too large for the
current scale into several closed walks.  The walks jointly use each edge of
the original cycle an odd number of times and every added edge lies inside
the cluster, so any face pair separated by the input stays separated by some
output.

``run_virtual`` replays the whole hierarchy construction alongside an
optimal cycle: it patches the cycle at every cluster it stays valid for,
samples bounded partitions, records which partition each surviving walk
crosses few times, and finally reports whether the advertised guarantees
(parity, separation cover, bounded cost growth, an amenable forcing for
every survivor) hold on this run.  The production pipeline never calls this
module; it exists to check the structural claims empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionViolated
from .ldd import ldd
from .ndhc import default_Z, merge_parts
from .paths import dijkstra, path_darts, weighted_diameter
from .planar import (
    ClosedWalk,
    DualCycle,
    DualGraph,
    WalkLike,
    _as_walk,
    check_separation_cover,
    dart_edge,
    dart_rev,
)
from .rng import derive

__all__ = [
    "PatchReport",
    "patch",
    "ReplayCluster",
    "ReplayPartition",
    "CertEntry",
    "CycleCertificate",
    "VirtualRunReport",
    "run_virtual",
]


# ---------------------------------------------------------------------------
# patching a single cycle against one cluster
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PatchReport:
    """Everything a test needs to audit one patching call."""

    input: ClosedWalk
    cycles: tuple[ClosedWalk, ...]
    changed: bool
    threshold: Fraction
    internal_cost: int
    special_vertices: tuple[int, ...]
    special_edges: tuple[int, ...]
    path_costs: tuple[int, ...]
    added_cost: int
    per_cycle_nonspecial_internal: tuple[int, ...]


def _internal(g, d: int, K: frozenset[int]) -> bool:
    return g.dart_tail(d) in K and g.dart_head(d) in K


def patch(
    cycle: WalkLike,
    K: frozenset[int],
    delta_l: Fraction | int,
    Z: int,
) -> PatchReport:
    """Split ``cycle`` so no piece is heavy inside ``K`` at scale ``delta_l``.

    If the cost of the cycle's edges internal to ``K`` is at most
    ``(Z/3) * delta_l`` the cycle is returned untouched.  Otherwise the
    cycle is traversed from its lowest-id vertex inside ``K``; every time
    the running internal cost exceeds the threshold, the tripping edge and
    its head become special and the counter resets.  Shortest paths inside
    ``K`` connect the start to each special vertex, each used twice, and
    the union decomposes into one closed walk per special vertex plus one
    closing piece.

    ``K`` must induce a connected subgraph containing the special vertices;
    a disconnected induced subgraph raises :class:`PreconditionViolated`.
    """
    walk = _as_walk(cycle)
    g = walk.dual.graph
    threshold = Fraction(Z, 3) * Fraction(delta_l)
    internal_cost = sum(
        g.edges[dart_edge(d)].cost for d in walk.darts if _internal(g, d, K)
    )
    if internal_cost <= threshold:
        return PatchReport(
            input=walk,
            cycles=(walk,),
            changed=False,
            threshold=threshold,
            internal_cost=internal_cost,
            special_vertices=(),
            special_edges=(),
            path_costs=(),
            added_cost=0,
            per_cycle_nonspecial_internal=(internal_cost,),
        )

    tails = walk.vertex_seq()
    r = min(v for v in tails if v in K)
    rot = tails.index(r)
    darts = walk.darts[rot:] + walk.darts[:rot]

    special_pos: list[int] = []
    special_vertices: list[int] = [r]
    run = 0
    for j, d in enumerate(darts):
        if not _internal(g, d, K):
            continue
        run += g.edges[dart_edge(d)].cost
        if run > threshold:
            special_pos.append(j)
            special_vertices.append(g.dart_head(d))
            run = 0
    assert special_pos, "above-threshold cost must trip the counter"

    dist, parent = dijkstra(g, r, K)
    paths: list[tuple[int, ...]] = []
    path_costs: list[int] = []
    for s in special_vertices[1:]:
        if s not in dist:
            raise PreconditionViolated(
                f"special vertex {s} unreachable from {r} inside the cluster"
            )
        paths.append(path_darts(g, parent, s))
        path_costs.append(dist[s])

    k = len(special_pos)
    pieces: list[tuple[int, ...]] = []
    for t in range(k + 1):
        seg_start = 0 if t == 0 else special_pos[t - 1] + 1
        seg_end = special_pos[t] + 1 if t < k else len(darts)
        pre = paths[t - 1] if t >= 1 else ()
        post = tuple(dart_rev(d) for d in reversed(paths[t])) if t < k else ()
        full = tuple(pre) + tuple(darts[seg_start:seg_end]) + post
        if full:
            pieces.append(full)
    out = tuple(ClosedWalk(walk.dual, ds) for ds in pieces)

    special_edge_ids = tuple(dart_edge(darts[j]) for j in special_pos)
    special_set = frozenset(special_edge_ids)
    nonspecial = tuple(
        sum(
            g.edges[dart_edge(d)].cost
            for d in w.darts
            if _internal(g, d, K) and dart_edge(d) not in special_set
        )
        for w in out
    )
    return PatchReport(
        input=walk,
        cycles=out,
        changed=True,
        threshold=threshold,
        internal_cost=internal_cost,
        special_vertices=tuple(special_vertices),
        special_edges=special_edge_ids,
        path_costs=tuple(path_costs),
        added_cost=sum(w.cost for w in out) - walk.cost,
        per_cycle_nonspecial_internal=nonspecial,
    )


# ---------------------------------------------------------------------------
# the replay harness
# ---------------------------------------------------------------------------


@dataclass
class ReplayCluster:
    cid: int
    level: int
    K: frozenset[int]
    parent: int | None
    partitions: list[int] = field(default_factory=list)


@dataclass
class ReplayPartition:
    pid: int
    cluster: int
    parts: tuple[frozenset[int], ...]
    shattering: bool
    children: tuple[int, ...]


@dataclass(frozen=True)
class CertEntry:
    pid: int
    crossings: int
    budget: int

    @property
    def ok(self) -> bool:
        return self.crossings <= self.budget


@dataclass(frozen=True)
class CycleCertificate:
    """Forcing for one surviving walk plus its per-node crossing audit."""

    cycle_index: int
    forcing: dict[int, int]
    entries: tuple[CertEntry, ...]

    @property
    def amenable(self) -> bool:
        return all(e.ok for e in self.entries)


@dataclass
class VirtualRunReport:
    seed: int
    Z: int
    levels: int
    failed: bool
    failure_reason: str | None
    walks: list[ClosedWalk]
    walk_parent: list[int | None]
    alive: list[int]
    psi: dict[tuple[int, int], int]
    cost0: int
    total_cost: int
    per_level_ratio: list[Fraction]
    separation_demand_ok: bool
    separation_faces_ok: bool
    parity_ok: bool
    certificates: list[CycleCertificate]
    path_bound_violations: int
    patch_calls: int
    patched: int
    cluster_nodes: list[ReplayCluster]
    partition_nodes: list[ReplayPartition]
    size_bound: int | None

    @property
    def collection(self) -> list[ClosedWalk]:
        return [self.walks[i] for i in self.alive]

    @property
    def cost_ratio(self) -> Fraction:
        return Fraction(self.total_cost, self.cost0) if self.cost0 else Fraction(1)

    @property
    def amenable_ok(self) -> bool:
        return bool(self.certificates) and all(c.amenable for c in self.certificates)

    def summary(self) -> str:
        lines = [
            f"seed={self.seed} Z={self.Z} levels={self.levels}",
            f"cycles: {len(self.alive)} alive of {len(self.walks)} seen"
            + (f" (bound {self.size_bound})" if self.size_bound is not None else ""),
            f"cost: {self.total_cost} / {self.cost0} = {float(self.cost_ratio):.4f}",
            f"patching: {self.patched}/{self.patch_calls} calls changed a cycle, "
            f"{self.path_bound_violations} path-bound diagnostics",
            f"separation: demands={'ok' if self.separation_demand_ok else 'BROKEN'} "
            f"faces={'ok' if self.separation_faces_ok else 'BROKEN'} "
            f"parity={'ok' if self.parity_ok else 'BROKEN'}",
            f"forcing: {'amenable' if self.amenable_ok else 'NOT amenable'} "
            f"for {len(self.certificates)} walks over {len(self.cluster_nodes)} clusters",
        ]
        if self.failed:
            lines.insert(0, f"FAILED: {self.failure_reason}")
        return "\n".join(lines)


def _distinct_crossings(
    g, walk: ClosedWalk, K: frozenset[int], owner: dict[int, int]
) -> int:
    count = 0
    for ei in walk.edge_multiplicity:
        u, v, _ = g.edges[ei]
        if u in K and v in K and u != v and owner[u] != owner[v]:
            count += 1
    return count


def _faces_separation(
    dual: DualGraph, base: ClosedWalk, others: Sequence[ClosedWalk]
) -> bool:
    base_side = base.side()
    sides = [w.side() for w in others]
    faces = list(dual.all_faces())
    for i, a in enumerate(faces):
        for b in faces[i + 1 :]:
            if (a in base_side) != (b in base_side):
                if not any((a in s) != (b in s) for s in sides):
                    return False
    return True


def run_virtual(
    dual: DualGraph,
    C0: DualCycle,
    *,
    eps: Fraction | float = Fraction(1, 2),
    Z: int | None = None,
    samples_factor: int = 2,
    seed: int = 0,
    cycles_cap: int = 5000,
) -> VirtualRunReport:
    """Replay the hierarchy construction against a reference cycle ``C0``.

    Only the branches actually selected for some surviving walk are
    materialized; partitions nobody selects would never be consulted by the
    checks, so skipping them changes no reported quantity.  A failure
    (every sampled partition crossed too often, or a merge request touching
    more than ``2 Z`` parts) stops the run and is recorded in the report
    rather than raised.
    """
    g = dual.graph
    n = dual.n
    Z = default_Z(n, eps) if Z is None else Z
    base = C0.to_walk()
    diam = weighted_diameter(g) if n > 1 else 0
    last_level = (diam - 1).bit_length() if diam >= 1 else -1
    samples = max(1, samples_factor * max(1, math.ceil(math.log2(max(2, n)))))

    def delta(level: int) -> Fraction:
        return Fraction(diam, 2**level)

    clusters: list[ReplayCluster] = []
    partitions: list[ReplayPartition] = []
    everything = frozenset(g.vertices())
    clusters.append(ReplayCluster(cid=0, level=0, K=everything, parent=None))

    walks: list[ClosedWalk] = [base]
    walk_parent: list[int | None] = [None]
    alive: list[int] = [0]
    psi: dict[tuple[int, int], int] = {}

    def chain(cid: int) -> list[tuple[int, int]]:
        """(ancestor cluster, partition below it) pairs above ``cid``."""
        out: list[tuple[int, int]] = []
        node = clusters[cid]
        while node.parent is not None:
            p = partitions[node.parent]
            out.append((p.cluster, p.pid))
            node = clusters[p.cluster]
        return list(reversed(out))

    def is_valid(idx: int, cid: int) -> bool:
        for acid, apid in chain(cid):
            a: int | None = idx
            while a is not None:
                if psi.get((acid, a)) == apid:
                    break
                a = walk_parent[a]
            else:
                return False
        return True

    def new_partition(
        cid: int, parts: tuple[frozenset[int], ...], level: int, shattering: bool
    ) -> int:
        pid = len(partitions)
        kids = []
        for part in parts:
            kid = len(clusters)
            clusters.append(
                ReplayCluster(cid=kid, level=level + 1, K=part, parent=pid)
            )
            kids.append(kid)
        partitions.append(
            ReplayPartition(
                pid=pid,
                cluster=cid,
                parts=parts,
                shattering=shattering,
                children=tuple(kids),
            )
        )
        clusters[cid].partitions.append(pid)
        return pid

    failed = False
    failure_reason: str | None = None
    per_level_ratio: list[Fraction] = []
    stage_demand_ok = True
    stage_faces_ok = True
    parity_ok = True
    path_violations = 0
    patch_calls = 0
    patched = 0

    def check_stage() -> None:
        nonlocal stage_demand_ok, stage_faces_ok, parity_ok
        current = [walks[i] for i in alive]
        if not check_separation_cover(base, current, check_parity=True):
            if check_separation_cover(base, current):
                parity_ok = False
            else:
                stage_demand_ok = False
        if not _faces_separation(dual, base, current):
            stage_faces_ok = False

    level = 0
    while level <= last_level and not failed:
        level_start_cost = sum(walks[i].cost for i in alive)
        todo = sorted(
            c.cid for c in clusters if c.level == level and len(c.K) > 1
        )
        for cid in todo:
            if failed:
                break
            node = clusters[cid]
            valid_now = [i for i in alive if is_valid(i, cid)]

            for idx in valid_now:
                patch_calls += 1
                rep = patch(walks[idx], node.K, delta(level), Z)
                for pc in rep.path_costs:
                    if pc > delta(level):
                        path_violations += 1
                if not rep.changed:
                    continue
                patched += 1
                alive.remove(idx)
                for w in rep.cycles:
                    walks.append(w)
                    walk_parent.append(idx)
                    alive.append(len(walks) - 1)
                if len(walks) > cycles_cap:
                    failed = True
                    failure_reason = f"cycle cap {cycles_cap} exceeded"
                    break
            if failed:
                break

            sampled: list[tuple[frozenset[int], ...]] = []
            owners: list[dict[int, int]] = []
            for s in range(samples):
                rng = derive(seed, "virt", str(cid), str(level), "sample", str(s))
                dec = ldd(g, delta(level + 1), rng, node.K)
                parts = tuple(sorted(dec.parts, key=min))
                sampled.append(parts)
                owners.append(
                    {v: i for i, part in enumerate(parts) for v in part}
                )

            chosen: dict[tuple[int, frozenset[int]], int] = {}
            for idx in [i for i in alive if is_valid(i, cid)]:
                w = walks[idx]
                sel = None
                for s in range(samples):
                    if _distinct_crossings(g, w, node.K, owners[s]) <= Z:
                        sel = s
                        break
                if sel is None:
                    failed = True
                    failure_reason = (
                        f"level {level} cluster {cid}: every sampled partition "
                        f"crossed more than Z={Z} times"
                    )
                    break
                parts = sampled[sel]
                owner = owners[sel]
                kappa: set[int] = set()
                for ei in w.edge_multiplicity:
                    u, v, _ = g.edges[ei]
                    if u in node.K and v in node.K:
                        kappa.add(owner[u])
                        kappa.add(owner[v])
                if not kappa:
                    kappa = {0}
                if len(kappa) > 2 * Z:
                    failed = True
                    failure_reason = (
                        f"level {level} cluster {cid}: merge request touches "
                        f"{len(kappa)} parts, above 2Z={2 * Z}"
                    )
                    break
                key = (sel, frozenset(kappa))
                pid = chosen.get(key)
                if pid is None:
                    merged = merge_parts(dual, parts, tuple(sorted(kappa)))
                    pid = new_partition(cid, merged, level, shattering=False)
                    chosen[key] = pid
                psi[(cid, idx)] = pid
        per_level_ratio.append(
            Fraction(sum(walks[i].cost for i in alive), level_start_cost)
            if level_start_cost
            else Fraction(1)
        )
        check_stage()
        level += 1

    if not failed:
        for node in list(clusters):
            if len(node.K) > 1 and not node.partitions:
                parts = tuple(frozenset({v}) for v in sorted(node.K))
                pid = new_partition(node.cid, parts, node.level, shattering=True)
                for idx in alive:
                    psi[(node.cid, idx)] = pid
        check_stage()

    certificates: list[CycleCertificate] = []
    if not failed:
        for idx in alive:
            w = walks[idx]
            phi: dict[int, int] = {}
            entries: list[CertEntry] = []
            stack = [0]
            while stack:
                cid = stack.pop()
                node = clusters[cid]
                if len(node.K) <= 1:
                    continue
                a: int | None = idx
                pid = None
                while a is not None:
                    pid = psi.get((cid, a))
                    if pid is not None:
                        break
                    a = walk_parent[a]
                if pid is None:
                    continue
                phi[cid] = pid
                part_node = partitions[pid]
                owner = {
                    v: i for i, part in enumerate(part_node.parts) for v in part
                }
                entries.append(
                    CertEntry(
                        pid=pid,
                        crossings=_distinct_crossings(g, w, node.K, owner),
                        budget=0 if part_node.shattering else Z,
                    )
                )
                stack.extend(part_node.children)
            certificates.append(
                CycleCertificate(
                    cycle_index=idx, forcing=phi, entries=tuple(entries)
                )
            )

    costs = [e.cost for e in g.edges]
    size_bound: int | None = None
    if costs and min(costs) >= 1:
        size_bound = int((1 + Fraction(eps)) * base.cost) // min(costs)

    return VirtualRunReport(
        seed=seed,
        Z=Z,
        levels=last_level + 1,
        failed=failed,
        failure_reason=failure_reason,
        walks=walks,
        walk_parent=walk_parent,
        alive=alive,
        psi=psi,
        cost0=base.cost,
        total_cost=sum(walks[i].cost for i in alive),
        per_level_ratio=per_level_ratio,
        separation_demand_ok=stage_demand_ok,
        separation_faces_ok=stage_faces_ok,
        parity_ok=parity_ok,
        certificates=certificates,
        path_bound_violations=path_violations,
        patch_calls=patch_calls,
        patched=patched,
        cluster_nodes=clusters,
        partition_nodes=partitions,
        size_bound=size_bound,
    )
