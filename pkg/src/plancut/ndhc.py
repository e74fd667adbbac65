"""Hierarchical clustering tree over the dual graph.

The tree alternates cluster nodes (vertex sets of the dual) and partition
nodes (ways of splitting a cluster).  The root partition holds everything in
one part.  A cluster entered at scale ``e`` (its diameter is at most
``diam / 2^e``) is split by ball-carving samples at every finer scale ``j``
down to the unit scale; each sample spawns one candidate partition per
admissible core subset ``kappa``, where non-core parts are absorbed into
adjacent core parts so at most ``2 Z`` parts survive.  Sampling below the
cluster's own diameter guarantees every partition properly splits it, so
child clusters strictly shrink and the tree is finite without trivial
self-chains.  Multi-vertex clusters of dual diameter zero cannot be split by
distance and are shattered into singletons instead; singleton clusters are
leaves.

The point of keeping many partitions per cluster is nondeterminism: a cycle
is *amenable* if along some root-to-leaf choice of partitions it never
crosses a partition more than ``Z`` times, and never has an edge inside a
shattered cluster.  Queries for partition paths, accumulated boundaries and
crossing counts live here; profile enumeration builds on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import CapExceeded, PreconditionViolated
from .ldd import ldd
from .paths import weighted_diameter
from .planar import ClosedWalk, DualCycle, DualGraph
from .rng import derive

__all__ = ["Caps", "ClusterNode", "PartitionNode", "NDHC", "default_Z", "merge_parts"]


@dataclass(frozen=True)
class Caps:
    """Budgets that keep the tree finite; overruns are recorded as events."""

    kappa_sets: int = 32
    partitions_per_cluster: int = 24
    total_clusters: int = 20000


def default_Z(n_dual: int, eps: Fraction | float) -> int:
    """Crossing budget: ceil(3 ln n / eps), at least 1."""
    if n_dual < 2:
        return 1
    return max(1, math.ceil(3.0 * math.log(n_dual) / float(eps)))


@dataclass
class ClusterNode:
    cid: int
    entry_scale: int
    K: frozenset[int]
    diam: int
    parent: int | None
    partitions: list[int] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return len(self.K) == 1


@dataclass
class PartitionNode:
    pid: int
    cluster: int
    scale: int
    parts: tuple[frozenset[int], ...]
    shattering: bool
    children: tuple[int, ...] = ()
    """Child cluster id for each part, same order as ``parts``."""


def _canonical(parts: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    return tuple(sorted((p for p in parts if p), key=min))


def merge_parts(
    dual: DualGraph,
    parts: Sequence[frozenset[int]],
    kappa: Sequence[int],
) -> tuple[frozenset[int], ...]:
    """Absorb non-core parts into adjacent core parts, deterministically.

    ``kappa`` indexes the core parts; an empty ``kappa`` promotes the first
    part.  Repeatedly, the lowest-indexed unabsorbed part that touches a
    core merges into its smallest adjacent core (ties go to the earlier
    core), until only cores remain.  Preferring the smallest core keeps the
    merged parts balanced instead of funneling everything into one blob.
    The cluster is connected, so the fixpoint always empties the non-core
    list.
    """
    cores = [set(parts[i]) for i in (kappa if kappa else [0])]
    core_set = set(kappa) if kappa else {0}
    others = [set(parts[i]) for i in range(len(parts)) if i not in core_set]

    adj = dual.graph.adjacency()

    def touches(a: set[int], b: set[int]) -> bool:
        small, big = (a, b) if len(a) <= len(b) else (b, a)
        return any(w in big for v in small for w, _, _ in adj[v])

    while others:
        progressed = False
        for oi, other in enumerate(others):
            hits = [c for c in cores if touches(other, c)]
            if hits:
                min(hits, key=len).update(other)
                del others[oi]
                progressed = True
                break
        if not progressed:
            raise PreconditionViolated("cluster is not connected; merge cannot finish")
    return _canonical(frozenset(c) for c in cores)


class NDHC:
    """The clustering tree plus its query interface."""

    def __init__(
        self,
        dual: DualGraph,
        *,
        eps: Fraction | float = Fraction(1, 2),
        Z: int | None = None,
        samples_factor: int = 2,
        seed: int = 0,
        caps: Caps | None = None,
        strict: bool = False,
    ) -> None:
        self.dual = dual
        self.eps = eps
        n = dual.n
        self.Z = default_Z(n, eps) if Z is None else Z
        self.caps = caps or Caps()
        self.strict = strict
        self.seed = seed
        self.events: list[str] = []

        self.diameter: int = weighted_diameter(dual.graph) if n > 1 else 0
        # finest scale: diam / 2^j drops below the cheapest positive cost (1)
        self.num_levels: int = self.diameter.bit_length()
        self.samples_per_scale: int = max(
            1, samples_factor * max(1, math.ceil(math.log2(max(2, n))))
        )

        self.clusters: list[ClusterNode] = []
        self.partitions: list[PartitionNode] = []

        everything = frozenset(dual.graph.vertices())
        root = PartitionNode(
            pid=0, cluster=-1, scale=0, parts=(everything,), shattering=False
        )
        self.partitions.append(root)
        self.root_partition = 0
        c0 = self._new_cluster(entry_scale=0, K=everything, parent=0)
        root.children = (c0,)
        self.root_cluster = c0

        queue = [c0]
        truncated = False
        while queue:
            cid = queue.pop(0)
            node = self.clusters[cid]
            if node.is_leaf:
                continue
            if truncated or node.diam == 0:
                if truncated and node.diam > 0:
                    self._event(f"cluster cap: shattering cluster {cid} early")
                queue.extend(self._attach_shattering(node))
                continue
            new_clusters = self._attach_sampled_partitions(node)
            if len(self.clusters) > self.caps.total_clusters:
                truncated = True
                self._event("total cluster cap reached; remaining clusters shatter")
            queue.extend(new_clusters)

    # -- construction helpers ----------------------------------------------

    def delta(self, scale: int) -> Fraction:
        return Fraction(self.diameter, 2**scale)

    def first_split_scale(self, node: ClusterNode) -> int:
        """Coarsest scale whose bound falls below the cluster's diameter."""
        j = node.entry_scale + 1
        while self.delta(j) >= node.diam:
            j += 1
        return j

    def _event(self, msg: str) -> None:
        self.events.append(msg)
        if self.strict:
            raise CapExceeded(msg)

    def _new_cluster(self, entry_scale: int, K: frozenset[int], parent: int | None) -> int:
        cid = len(self.clusters)
        diam = weighted_diameter(self.dual.graph, K) if len(K) > 1 else 0
        self.clusters.append(
            ClusterNode(cid=cid, entry_scale=entry_scale, K=K, diam=diam, parent=parent)
        )
        return cid

    def _attach_partition(
        self,
        node: ClusterNode,
        parts: tuple[frozenset[int], ...],
        scale: int,
        shattering: bool,
    ) -> list[int]:
        pid = len(self.partitions)
        kids = tuple(
            self._new_cluster(entry_scale=scale, K=p, parent=pid) for p in parts
        )
        self.partitions.append(
            PartitionNode(
                pid=pid,
                cluster=node.cid,
                scale=scale,
                parts=parts,
                shattering=shattering,
                children=kids,
            )
        )
        node.partitions.append(pid)
        return list(kids)

    def _attach_shattering(self, node: ClusterNode) -> list[int]:
        parts = _canonical(frozenset({v}) for v in sorted(node.K))
        return self._attach_partition(
            node, parts, scale=self.num_levels, shattering=True
        )

    def _attach_sampled_partitions(self, node: ClusterNode) -> list[int]:
        seen: set[frozenset[frozenset[int]]] = set()
        created: list[int] = []
        capped = False
        first = self.first_split_scale(node)
        for scale in range(first, max(self.num_levels, first) + 1):
            fully_shattered = True
            for s in range(self.samples_per_scale):
                rng = derive(
                    self.seed, "ndhc", str(node.cid), str(scale), "sample", str(s)
                )
                dec = ldd(self.dual.graph, self.delta(scale), rng, node.K)
                parts = _canonical(dec.parts)
                assert len(parts) >= 2, "sampling below the diameter must split"
                fully_shattered = fully_shattered and all(len(p) == 1 for p in parts)
                capped = self._emit_kappa_merges(node, parts, scale, seen, created)
                if capped:
                    break
            if capped or fully_shattered:
                # finer scales would resample the all-singleton carving
                break
        assert created, "split scales exist for positive-diameter clusters"
        return created

    def _emit_kappa_merges(
        self,
        node: ClusterNode,
        parts: tuple[frozenset[int], ...],
        scale: int,
        seen: set[frozenset[frozenset[int]]],
        created: list[int],
    ) -> bool:
        """Returns True when the per-cluster partition cap was reached."""
        emitted = 0
        max_k = min(2 * self.Z, len(parts))
        for size in range(2, max_k + 1):
            for kappa in combinations(range(len(parts)), size):
                if emitted >= self.caps.kappa_sets:
                    self._event(f"kappa cap at cluster {node.cid}")
                    return False
                emitted += 1
                merged = merge_parts(self.dual, parts, kappa)
                if len(merged) < 2:
                    continue
                sig = frozenset(merged)
                if sig in seen:
                    continue
                if len(seen) >= self.caps.partitions_per_cluster:
                    self._event(f"partition cap at cluster {node.cid}")
                    return True
                seen.add(sig)
                created.extend(
                    self._attach_partition(node, merged, scale, shattering=False)
                )
        return False

    # -- queries ------------------------------------------------------------

    def cluster(self, cid: int) -> ClusterNode:
        return self.clusters[cid]

    def partition(self, pid: int) -> PartitionNode:
        return self.partitions[pid]

    def parent_cluster(self, pid: int) -> ClusterNode | None:
        c = self.partitions[pid].cluster
        return None if c < 0 else self.clusters[c]

    def partn_path(self, pid: int) -> list[int]:
        """Partition ids from the root down to ``pid`` (inclusive)."""
        out = [pid]
        while True:
            c = self.partitions[out[-1]].cluster
            if c < 0:
                break
            parent = self.clusters[c].parent
            assert parent is not None
            out.append(parent)
        return list(reversed(out))

    def chain_cluster(self, upper_pid: int, lower_pid: int) -> int:
        """The cluster between two consecutive partitions on a path."""
        c = self.partitions[lower_pid].cluster
        if c < 0 or self.clusters[c].parent != upper_pid:
            raise PreconditionViolated("partitions are not consecutive on a path")
        return c

    def lca(self, pid_a: int, pid_b: int) -> int:
        pa, pb = self.partn_path(pid_a), self.partn_path(pid_b)
        out = self.root_partition
        for x, y in zip(pa, pb):
            if x != y:
                break
            out = x
        return out

    def pi_plus(self, pid: int) -> tuple[frozenset[int], ...]:
        """Parts of ``pid`` plus every ancestor part off the chosen chain."""
        path = self.partn_path(pid)
        parts: list[frozenset[int]] = list(self.partitions[pid].parts)
        for upper, lower in zip(path, path[1:]):
            chain_K = self.clusters[self.partitions[lower].cluster].K
            for part in self.partitions[upper].parts:
                if part != chain_K:
                    parts.append(part)
        return _canonical(parts)

    def boundary(self, pid: int) -> frozenset[int]:
        """Dual faces fully incident to this partition's set, split by it."""
        node = self.partitions[pid]
        parent = self.parent_cluster(pid)
        K = parent.K if parent is not None else frozenset(self.dual.graph.vertices())
        return self._split_faces(node.parts, K)

    def boundary_plus(self, pid: int) -> frozenset[int]:
        out: set[int] = set()
        for p in self.partn_path(pid):
            out |= self.boundary(p)
        return frozenset(out)

    def _split_faces(
        self, parts: Sequence[frozenset[int]], universe: frozenset[int]
    ) -> frozenset[int]:
        owner: dict[int, int] = {}
        for i, p in enumerate(parts):
            for v in p:
                owner[v] = i
        out = []
        for f in self.dual.all_faces():
            incident = self.dual.face_vertices(f)
            if len(incident) < 2 or not incident <= universe:
                continue
            ids = {owner[v] for v in incident}
            if len(ids) > 1:
                out.append(f)
        return frozenset(out)

    def boundary_of_pi_plus(self, pid: int) -> frozenset[int]:
        """Direct evaluation used to cross-check ``boundary_plus``."""
        parts = self.pi_plus(pid)
        universe = frozenset().union(*parts) if parts else frozenset()
        return self._split_faces(parts, universe)

    def crossings(self, cycle: DualCycle | ClosedWalk, pid: int) -> int:
        """Distinct positive-cost cycle edges inside the parent cluster that
        change parts.

        Zero-cost edges join vertices at distance zero, which no ball
        carving can separate; shattering below that scale still splits
        them, so charging those crossings would outlaw cycles the metric
        considers free.  They are skipped instead.
        """
        node = self.partitions[pid]
        parent = self.parent_cluster(pid)
        K = parent.K if parent is not None else frozenset(self.dual.graph.vertices())
        owner: dict[int, int] = {}
        for i, p in enumerate(node.parts):
            for v in p:
                owner[v] = i
        eids = (
            cycle.key
            if isinstance(cycle, DualCycle)
            else frozenset(cycle.edge_multiplicity)
        )
        count = 0
        for ei in eids:
            u, v, cost = self.dual.graph.edges[ei]
            if cost and u in K and v in K and u != v and owner[u] != owner[v]:
                count += 1
        return count

    def amenable_at(self, cycle: DualCycle | ClosedWalk, pid: int) -> bool:
        """Crossing rule at one node: Z for sampled, zero for shattering."""
        budget = 0 if self.partitions[pid].shattering else self.Z
        return self.crossings(cycle, pid) <= budget

    def leaves(self) -> list[int]:
        return [c.cid for c in self.clusters if c.is_leaf]

    def stats(self) -> dict[str, int]:
        return {
            "clusters": len(self.clusters),
            "partitions": len(self.partitions),
            "leaves": len(self.leaves()),
            "levels": self.num_levels,
            "Z": self.Z,
            "events": len(self.events),
        }
