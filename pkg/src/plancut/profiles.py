"""Crossing profiles: what a cycle may look like from a partition node.

For a partition node ``p``, the accumulated boundary faces along its root
path form the window through which the LP observes a candidate cycle.  The
profile of a cycle at ``p`` is the set of boundary faces it encloses.  Only
cycles obeying the crossing budget at every node on the path contribute, so
the profile sets stay small even though cycles are numerous.

Enumeration is direct: walk the shared simple-cycle list once, track budget
compliance down the tree, and project.  A slower guess-the-crossing-edges
driver lives at the bottom; tests use it as an independent route to the
same sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import CycleBudgetExceeded, NotSimpleCycle, PreconditionViolated
from .ndhc import NDHC
from .planar import DualCycle

__all__ = [
    "ProfileSet",
    "enumerate_aplus",
    "all_profiles",
    "aplus_pair",
    "profiles_by_crossing_guess",
]


def _canon(profiles: set[frozenset[int]]) -> tuple[frozenset[int], ...]:
    return tuple(sorted(profiles, key=lambda s: (len(s), sorted(s))))


@dataclass
class ProfileSet:
    """Realizable boundary traces at one partition node."""

    pid: int
    boundary: frozenset[int]
    profiles: tuple[frozenset[int], ...]
    witnesses: tuple[int, ...]
    """Index into the shared cycle list of one witness per profile."""

    _pos: dict[frozenset[int], int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._pos = {s: i for i, s in enumerate(self.profiles)}

    def __contains__(self, profile: frozenset[int]) -> bool:
        return profile in self._pos

    def __len__(self) -> int:
        return len(self.profiles)

    def index(self, profile: frozenset[int]) -> int:
        return self._pos[profile]


def _amenable_prefix(tree: NDHC, cycles: list[DualCycle]) -> list[list[bool]]:
    """ok[pid][ci] = cycle ci obeys the budget at pid and all its ancestors.

    Partition ids increase along any root path, so a single pass in id order
    suffices.
    """
    ok = [[True] * len(cycles)]
    for pid in range(1, len(tree.partitions)):
        above = ok[tree.partn_path(pid)[-2]]
        ok.append(
            [above[ci] and tree.amenable_at(c, pid) for ci, c in enumerate(cycles)]
        )
    return ok


def all_profiles(tree: NDHC, cycles: list[DualCycle]) -> list[ProfileSet]:
    ok = _amenable_prefix(tree, cycles)
    out: list[ProfileSet] = []
    for pid in range(len(tree.partitions)):
        boundary = tree.boundary_plus(pid)
        found: dict[frozenset[int], int] = {}
        for ci, c in enumerate(cycles):
            if ok[pid][ci]:
                found.setdefault(c.inside & boundary, ci)
        profiles = _canon(set(found))
        out.append(
            ProfileSet(
                pid=pid,
                boundary=boundary,
                profiles=profiles,
                witnesses=tuple(found[s] for s in profiles),
            )
        )
    return out


def enumerate_aplus(tree: NDHC, cycles: list[DualCycle], pid: int) -> ProfileSet:
    """Profiles at one node; prefer :func:`all_profiles` for many nodes."""
    return all_profiles(tree, cycles)[pid]


def aplus_pair(
    tree: NDHC, a: ProfileSet, b: ProfileSet
) -> tuple[frozenset[int], ...]:
    """Profile set indexing the pair variable of two partition nodes.

    When one node lies on the other's root path, the deeper window already
    contains the shallower one and the deeper set is returned unchanged.
    Otherwise the two paths must fork at a partition node (forking at a
    cluster would mean rival partitions of the same cluster, which no single
    run of the rounding can realize) and the index space is the product of
    unions.
    """
    pa, pb = tree.partn_path(a.pid), tree.partn_path(b.pid)
    if a.pid in pb:
        return b.profiles
    if b.pid in pa:
        return a.profiles
    depth = len([1 for x, y in zip(pa, pb) if x == y])
    if tree.partition(pa[depth]).cluster == tree.partition(pb[depth]).cluster:
        raise PreconditionViolated(
            "paths fork at a cluster node; no common refinement exists"
        )
    return _canon({sa | sb for sa in a.profiles for sb in b.profiles})


# ---------------------------------------------------------------------------
# Independent route: guess the crossing edges, then search for a cycle
# ---------------------------------------------------------------------------


def _cycles_within(tree: NDHC, allowed: list[int], budget: int):
    """Simple cycles using only ``allowed`` edges, by brute subset checking."""
    if 2 ** len(allowed) > budget:
        raise CycleBudgetExceeded(f"2^{len(allowed)} subsets exceed budget {budget}")
    for r in range(1, len(allowed) + 1):
        for combo in combinations(allowed, r):
            try:
                yield DualCycle.from_edge_set(tree.dual, frozenset(combo))
            except NotSimpleCycle:
                continue


def profiles_by_crossing_guess(
    tree: NDHC, pid: int, budget: int = 1 << 16
) -> set[frozenset[int]]:
    """Recompute the profile set without the shared cycle enumerator.

    Guesses which inter-part edges of the accumulated partition the cycle
    crosses, discards guesses that bust a budget on the path, then searches
    for a completing cycle among intra-part edges plus the guess.
    Exponential, so only sensible on very small duals.
    """
    g = tree.dual.graph
    parts = tree.pi_plus(pid)
    owner: dict[int, int] = {}
    for i, part in enumerate(parts):
        for v in part:
            owner[v] = i
    cross = [
        ei for ei, (u, v, _) in enumerate(g.edges) if u != v and owner[u] != owner[v]
    ]
    cross_set = set(cross)
    intra = [ei for ei in range(len(g.edges)) if ei not in cross_set]
    path = tree.partn_path(pid)
    boundary = tree.boundary_plus(pid)

    def per_node_counts_ok(edges: frozenset[int]) -> bool:
        for q in path:
            budget_q = 0 if tree.partition(q).shattering else tree.Z
            node = tree.partition(q)
            parent = tree.parent_cluster(q)
            K = parent.K if parent is not None else frozenset(g.vertices())
            owner_q: dict[int, int] = {}
            for i, part in enumerate(node.parts):
                for v in part:
                    owner_q[v] = i
            count = sum(
                1
                for ei in edges
                if g.edges[ei].u in K
                and g.edges[ei].v in K
                and g.edges[ei].u != g.edges[ei].v
                and owner_q[g.edges[ei].u] != owner_q[g.edges[ei].v]
            )
            if count > budget_q:
                return False
        return True

    if 2 ** len(cross) > budget:
        raise CycleBudgetExceeded(f"2^{len(cross)} guesses exceed budget {budget}")
    found: set[frozenset[int]] = set()
    for r in range(len(cross) + 1):
        for guess in combinations(cross, r):
            guess_set = frozenset(guess)
            if not per_node_counts_ok(guess_set):
                continue
            for cycle in _cycles_within(tree, intra + list(guess), budget):
                if cycle.key & frozenset(cross_set) != guess_set:
                    continue
                found.add(cycle.inside & boundary)
    return found
