"""The lifted cut LP: variables over tree profiles, plus its solvers.

The model fractionally relaxes the choice of one amenable cycle.  Singleton
variables x({p},S) say "node p is on the chosen chain and the cycle shows
profile S through p's window"; pair variables extend this to two nodes that
can be alive in one run.  Projection variables z and y marshal that mass
down to single faces and face pairs, ending in y({s,t}), the probability
that faces s and t end up separated.  The objective charges y({s,t}) with
the total edge cost between the two faces; a demand row forces at least
alpha units of separated demand.

Two facts about the clustering tree keep the whole thing consistent:
boundary sets along a root path are disjoint, and every face with at least
two surrounding dual vertices lands on the boundary of exactly one alive
node per run.  Both are properties of the face-based boundary definition in
the tree module; integral encodings of amenable cycles then satisfy every
row with zero residual, which the acceptance suite checks with rational
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from .errors import (
    InfeasibleModel,
    MissingProfiles,
    NotAmenable,
    NumericalFailure,
    PreconditionViolated,
    UnboundedModel,
)
from .ndhc import NDHC
from .planar import DualCycle
from .profiles import ProfileSet, aplus_pair

__all__ = [
    "LpModel",
    "LpSolution",
    "VarKey",
    "alpha_grid",
    "build_lp",
    "encode_integral",
    "export_lp_text",
    "forcing_for_cycle",
    "relevant_nodes",
    "solve_lp",
]

# Variable keys.  All hashable tuples:
#   ("x", pid, S)            singleton profile variable
#   ("xx", pid_a, pid_b, S)  pair variable, pid_a < pid_b, nodes incomparable
#   ("z", pid, s, D, S)      single-face projection
#   ("yp", pid, (s, t), D, S)  face-pair projection at the meeting node
#   ("yst", (s, t))          overall separation of the face pair
VarKey = tuple


def _pair_key(s: int, t: int) -> tuple[int, int]:
    return (s, t) if s < t else (t, s)


# ---------------------------------------------------------------------------
# tree-shape helpers shared by the builder and the integral encoder
# ---------------------------------------------------------------------------


class _TreeIndex:
    """Path, ancestry, and boundary lookups cached per tree."""

    def __init__(self, tree: NDHC) -> None:
        self.tree = tree
        self.paths: list[tuple[int, ...]] = [
            tuple(tree.partn_path(pid)) for pid in range(len(tree.partitions))
        ]
        self.path_sets = [frozenset(p) for p in self.paths]
        self.boundary = [tree.boundary(pid) for pid in range(len(tree.partitions))]
        self.bplus = [tree.boundary_plus(pid) for pid in range(len(tree.partitions))]
        self.holders: dict[int, list[int]] = {}
        for pid, bd in enumerate(self.boundary):
            for face in bd:
                self.holders.setdefault(face, []).append(pid)

    def desc_or_self(self, a: int, p: int) -> bool:
        """True when node ``a`` lies on or below node ``p``."""
        return p in self.path_sets[a]

    def co_occurring(self, a: int, b: int) -> bool:
        """Can both nodes be alive in one run of the rounding?

        Yes when one lies on the other's path, or their paths fork at a
        partition node (two parts of one split).  Forking at a cluster means
        rival partitions of the same cluster, which no run realizes.
        """
        if a == b:
            return True
        pa, pb = self.paths[a], self.paths[b]
        if a in self.path_sets[b] or b in self.path_sets[a]:
            return True
        d = 0
        while pa[d] == pb[d]:
            d += 1
        return (
            self.tree.partition(pa[d]).cluster != self.tree.partition(pb[d]).cluster
        )

    def lca(self, a: int, b: int) -> int:
        pa, pb = self.paths[a], self.paths[b]
        out = pa[0]
        for x, y in zip(pa, pb):
            if x != y:
                break
            out = x
        return out

    def resolvers_under(self, face: int, p: int) -> list[int]:
        return [q for q in self.holders.get(face, []) if self.desc_or_self(q, p)]


def _cost_pairs(tree: NDHC) -> dict[tuple[int, int], Fraction]:
    out: dict[tuple[int, int], Fraction] = {}
    for u, v, cost in tree.dual.primal.edges:
        if u != v:
            key = _pair_key(u, v)
            out[key] = out.get(key, Fraction(0)) + Fraction(cost)
    return out


# ---------------------------------------------------------------------------
# model container
# ---------------------------------------------------------------------------


@dataclass
class LpModel:
    """Sparse rational rows over a registry of named variables."""

    alpha: Fraction
    keys: list[VarKey]
    index: dict[VarKey, int]
    rows: list[tuple[str, dict[int, Fraction], str, Fraction]]
    objective: dict[int, Fraction]
    upper: dict[int, Fraction]
    cost_pairs: dict[tuple[int, int], Fraction]
    demand_pairs: dict[tuple[int, int], Fraction]

    @property
    def nvars(self) -> int:
        return len(self.keys)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def counts(self) -> dict[str, int]:
        """Variable and row tallies by family, for audits and logs."""
        out: dict[str, int] = {}
        for key in self.keys:
            out[f"var:{key[0]}"] = out.get(f"var:{key[0]}", 0) + 1
        for name, _, _, _ in self.rows:
            fam = name.split("[", 1)[0]
            out[f"row:{fam}"] = out.get(f"row:{fam}", 0) + 1
        return out

    def vector(self, assignment: Mapping[VarKey, Fraction | int]) -> list[Fraction]:
        """Dense value vector; unregistered keys are vacuous and ignored."""
        vec = [Fraction(0)] * self.nvars
        for key, val in assignment.items():
            i = self.index.get(key)
            if i is not None:
                vec[i] = Fraction(val)
        return vec

    def residuals(
        self, values: Sequence[Fraction | float] | Mapping[VarKey, Fraction | int]
    ) -> dict[str, Fraction | float]:
        """Constraint violations per row name plus bound violations."""
        if isinstance(values, Mapping):
            values = self.vector(values)
        out: dict[str, Fraction | float] = {}
        for name, coeffs, sense, rhs in self.rows:
            lhs = sum(c * values[i] for i, c in coeffs.items())
            gap = lhs - rhs
            if sense == "=":
                viol = abs(gap)
            elif sense == ">=":
                viol = max(0, -gap)
            else:
                viol = max(0, gap)
            out[name] = viol
        for i, val in enumerate(values):
            bound_viol = max(0, -val, val - self.upper.get(i, math.inf))
            if bound_viol > 0:
                out[f"bound[{self.keys[i]!r}]"] = bound_viol
        return out

    def max_residual(
        self, values: Sequence[Fraction | float] | Mapping[VarKey, Fraction | int]
    ) -> Fraction | float:
        res = self.residuals(values)
        return max(res.values(), default=Fraction(0))

    def objective_value(
        self, values: Sequence[Fraction | float] | Mapping[VarKey, Fraction | int]
    ) -> Fraction | float:
        if isinstance(values, Mapping):
            values = self.vector(values)
        return sum(c * values[i] for i, c in self.objective.items())

    def with_alpha(self, alpha: Fraction | int) -> "LpModel":
        """Copy with the demand threshold row retargeted to ``alpha``.

        Everything else is shared, so sweeping a threshold grid costs one
        build.  A model without a demand row cannot reach a positive
        threshold.
        """
        target = Fraction(alpha)
        rows = list(self.rows)
        for r, (name, coeffs, sense, _) in enumerate(rows):
            if name == "alpha":
                rows[r] = (name, coeffs, sense, target)
                break
        else:
            if target > 0:
                raise InfeasibleModel("model has no demand row to retarget")
        return LpModel(
            alpha=target,
            keys=self.keys,
            index=self.index,
            rows=rows,
            objective=self.objective,
            upper=self.upper,
            cost_pairs=self.cost_pairs,
            demand_pairs=self.demand_pairs,
        )


@dataclass(frozen=True)
class LpSolution:
    status: str
    values: tuple[Fraction | float, ...]
    objective: Fraction | float
    max_residual: Fraction | float
    method: str

    @property
    def exact(self) -> bool:
        return self.method == "exact"


# ---------------------------------------------------------------------------
# builder
# ---------------------------------------------------------------------------


class _Registry:
    def __init__(self) -> None:
        self.keys: list[VarKey] = []
        self.index: dict[VarKey, int] = {}

    def get(self, key: VarKey) -> int:
        i = self.index.get(key)
        if i is None:
            i = len(self.keys)
            self.index[key] = i
            self.keys.append(key)
        return i


def _pair_sets(
    idx: _TreeIndex, s: int, t: int
) -> dict[int, set[frozenset[int]]]:
    """S(p,{s,t}): meeting node -> sets {p_s,p_t} resolving the two faces."""
    out: dict[int, set[frozenset[int]]] = {}
    for a in idx.holders.get(s, []):
        for b in idx.holders.get(t, []):
            if not idx.co_occurring(a, b):
                continue
            out.setdefault(idx.lca(a, b), set()).add(frozenset((a, b)))
    return out


def build_lp(
    tree: NDHC,
    profiles: Sequence[ProfileSet],
    demands: Mapping[tuple[int, int], int | Fraction] | None = None,
    alpha: Fraction | int = 1,
    Z: int | None = None,
) -> LpModel:
    """Assemble the full row set for one demand guess ``alpha``.

    ``profiles`` must cover every partition node of ``tree``.  ``Z`` is
    accepted for signature symmetry with the tree builder but the budgets
    are already baked into the profile sets; a mismatch is rejected.
    """
    if Z is not None and Z != tree.Z:
        raise PreconditionViolated(f"profile sets were built with Z={tree.Z}, not {Z}")
    nparts = len(tree.partitions)
    if len(profiles) < nparts or any(profiles[p].pid != p for p in range(nparts)):
        raise MissingProfiles(f"need profile sets for all {nparts} partition nodes")

    idx = _TreeIndex(tree)
    cost_pairs = _cost_pairs(tree)
    if demands is None:
        demands = tree.dual.face_demands
    demand_pairs = {
        _pair_key(s, t): Fraction(d) for (s, t), d in demands.items() if d
    }
    pairs = sorted(set(cost_pairs) | set(demand_pairs))

    reg = _Registry()
    rows: list[tuple[str, dict[int, Fraction], str, Fraction]] = []
    upper: dict[int, Fraction] = {}

    def add_row(
        name: str, coeffs: dict[int, Fraction], sense: str, rhs: Fraction
    ) -> None:
        coeffs = {i: c for i, c in coeffs.items() if c != 0}
        if not coeffs:
            satisfiable = rhs == 0 if sense == "=" else (rhs <= 0 if sense == ">=" else rhs >= 0)
            if not satisfiable:
                raise InfeasibleModel(f"row {name} degenerated to an empty impossible row")
            return
        rows.append((name, coeffs, sense, rhs))

    def accumulate(coeffs: dict[int, Fraction], i: int, c: Fraction) -> None:
        coeffs[i] = coeffs.get(i, Fraction(0)) + c

    # singleton variables, bounded to [0, 1]
    for pid in range(nparts):
        for S in profiles[pid].profiles:
            upper[reg.get(("x", pid, S))] = Fraction(1)

    pair_terms_memo: dict[frozenset[int], list[tuple[int, frozenset[int]]]] = {}

    def pair_var_terms(members: frozenset[int]) -> list[tuple[int, frozenset[int]]]:
        """(index, profile) pairs backing one node pair.

        Nested pairs alias the deeper node's singleton variable since its
        window already covers both; incomparable pairs get their own
        variables over the product profile set.
        """
        cached = pair_terms_memo.get(members)
        if cached is not None:
            return cached
        if len(members) == 1:
            (p,) = members
            terms = [(reg.get(("x", p, S)), S) for S in profiles[p].profiles]
        else:
            a, b = sorted(members)
            if idx.desc_or_self(b, a):
                terms = [(reg.get(("x", b, S)), S) for S in profiles[b].profiles]
            else:
                terms = []
                for S in aplus_pair(tree, profiles[a], profiles[b]):
                    i = reg.get(("xx", a, b, S))
                    upper[i] = Fraction(1)
                    terms.append((i, S))
        pair_terms_memo[members] = terms
        return terms

    # [consis1] the top window is empty, so its only profile has mass one
    root = tree.root_partition
    add_row(
        "root_pin",
        {reg.get(("x", root, frozenset())): Fraction(1)},
        "=",
        Fraction(1),
    )

    # [assign] each cluster hands its parent's profile mass to one child
    for cluster in tree.clusters:
        if not cluster.partitions:
            continue
        p = cluster.parent
        assert p is not None
        for S in profiles[p].profiles:
            coeffs = {reg.get(("x", p, S)): Fraction(1)}
            for child in cluster.partitions:
                for S2 in profiles[child].profiles:
                    if S2 & idx.bplus[p] == S:
                        accumulate(coeffs, reg.get(("x", child, S2)), Fraction(-1))
            add_row(f"assign[{cluster.cid},{sorted(S)}]", coeffs, "=", Fraction(0))

    # face-pair scaffolding: S(p,{s,t}) per pair, then z / y / yst rows
    pair_sets_by_pair = {(s, t): _pair_sets(idx, s, t) for s, t in pairs}
    z_defined: set[VarKey] = set()

    def define_z(p: int, s: int) -> None:
        for D in (frozenset(), frozenset((s,))):
            for W in profiles[p].profiles:
                key = ("z", p, s, D, W)
                if key in z_defined:
                    continue
                z_defined.add(key)
                coeffs = {reg.get(key): Fraction(1)}
                for q in idx.resolvers_under(s, p):
                    for S in profiles[q].profiles:
                        if S & {s} == D and S & idx.bplus[p] == W:
                            accumulate(coeffs, reg.get(("x", q, S)), Fraction(-1))
                add_row(f"zdef[{p},{s},{sorted(D)},{sorted(W)}]", coeffs, "=", Fraction(0))

    yp_by_pair: dict[tuple[int, int], list[int]] = {}
    for s, t in pairs:
        st = frozenset((s, t))
        meeting = pair_sets_by_pair[(s, t)]
        yp_by_pair[(s, t)] = sorted(meeting)
        # [y] the pair mass meeting at p, split by trace D and window W
        for p, member_sets in sorted(meeting.items()):
            backing = [
                term for members in sorted(member_sets, key=sorted)
                for term in pair_var_terms(members)
            ]
            for D in (frozenset(), frozenset((s,)), frozenset((t,)), st):
                for W in profiles[p].profiles:
                    coeffs = {reg.get(("yp", p, (s, t), D, W)): Fraction(1)}
                    for i, S in backing:
                        if S & st == D and S & idx.bplus[p] == W:
                            accumulate(coeffs, i, Fraction(-1))
                    add_row(
                        f"ydef[{p},{s},{t},{sorted(D)},{sorted(W)}]",
                        coeffs,
                        "=",
                        Fraction(0),
                    )

        # [yst] overall separation: exactly one face of the pair inside
        coeffs = {reg.get(("yst", (s, t))): Fraction(1)}
        for p in yp_by_pair[(s, t)]:
            for D in (frozenset((s,)), frozenset((t,))):
                for W in profiles[p].profiles:
                    accumulate(coeffs, reg.get(("yp", p, (s, t), D, W)), Fraction(-1))
        add_row(f"ystdef[{s},{t}]", coeffs, "=", Fraction(0))

    # [marginals] + [xfW]: only where both faces resolve somewhere below p,
    # which is exactly when an alive chain through p must resolve them there
    for s, t in pairs:
        st = frozenset((s, t))
        meeting = yp_by_pair[(s, t)]
        gated = [
            p
            for p in range(nparts)
            if idx.resolvers_under(s, p) and idx.resolvers_under(t, p)
        ]
        for p in gated:
            define_z(p, s)
            define_z(p, t)
            under = [q for q in meeting if idx.desc_or_self(q, p)]
            for face, other in ((s, t), (t, s)):
                for D in (frozenset(), frozenset((face,))):
                    for W in profiles[p].profiles:
                        coeffs = {reg.get(("z", p, face, D, W)): Fraction(1)}
                        for q in under:
                            for D2 in (
                                frozenset(),
                                frozenset((s,)),
                                frozenset((t,)),
                                st,
                            ):
                                if D2 & {face} != D:
                                    continue
                                for W2 in profiles[q].profiles:
                                    if W2 & idx.bplus[p] == W:
                                        accumulate(
                                            coeffs,
                                            reg.get(("yp", q, (s, t), D2, W2)),
                                            Fraction(-1),
                                        )
                        add_row(
                            f"marg[{p},{face},{other},{sorted(D)},{sorted(W)}]",
                            coeffs,
                            "=",
                            Fraction(0),
                        )
            # [xfW] the pair mass under p re-aggregates p's own profile mass
            all_member_sets = [
                members
                for q in under
                for members in sorted(pair_sets_by_pair[(s, t)][q], key=sorted)
            ]
            backing = [
                term for members in all_member_sets for term in pair_var_terms(members)
            ]
            for W in profiles[p].profiles:
                coeffs = {reg.get(("x", p, W)): Fraction(1)}
                for i, S in backing:
                    if S & idx.bplus[p] == W:
                        accumulate(coeffs, i, Fraction(-1))
                add_row(f"xfw[{p},{s},{t},{sorted(W)}]", coeffs, "=", Fraction(0))

    # [alpha] separated demand must reach the guess
    coeffs = {
        reg.get(("yst", pair)): d for pair, d in sorted(demand_pairs.items())
    }
    add_row("alpha", coeffs, ">=", Fraction(alpha))

    objective = {
        reg.get(("yst", pair)): c for pair, c in sorted(cost_pairs.items())
    }
    return LpModel(
        alpha=Fraction(alpha),
        keys=reg.keys,
        index=reg.index,
        rows=rows,
        objective=objective,
        upper=upper,
        cost_pairs=cost_pairs,
        demand_pairs=demand_pairs,
    )


# ---------------------------------------------------------------------------
# forcings and the integral encoding
# ---------------------------------------------------------------------------


def relevant_nodes(tree: NDHC, forcing: Mapping[int, int]) -> list[int]:
    """Partition nodes alive under ``forcing`` (cluster id -> chosen child)."""
    out = [tree.root_partition]
    stack = list(tree.partitions[tree.root_partition].children)
    while stack:
        cid = stack.pop()
        cluster = tree.clusters[cid]
        if not cluster.partitions:
            continue
        pid = forcing.get(cid)
        if pid is None or pid not in cluster.partitions:
            raise PreconditionViolated(f"forcing misses cluster {cid}")
        out.append(pid)
        stack.extend(tree.partitions[pid].children)
    return sorted(out)


def forcing_for_cycle(tree: NDHC, cycle: DualCycle) -> dict[int, int]:
    """Greedy forcing: each alive cluster picks the child crossed least.

    Raises :class:`NotAmenable` when some alive cluster has no child within
    budget, mirroring a failed run instead of papering over it.
    """
    forcing: dict[int, int] = {}
    stack = list(tree.partitions[tree.root_partition].children)
    while stack:
        cid = stack.pop()
        cluster = tree.clusters[cid]
        if not cluster.partitions:
            continue
        best: tuple[int, int] | None = None
        for pid in cluster.partitions:
            budget = 0 if tree.partitions[pid].shattering else tree.Z
            crossings = tree.crossings(cycle, pid)
            if crossings <= budget and (best is None or crossings < best[0]):
                best = (crossings, pid)
        if best is None:
            raise NotAmenable(f"no child of cluster {cid} is within budget")
        forcing[cid] = best[1]
        stack.extend(tree.partitions[best[1]].children)
    return forcing


def encode_integral(
    cycle: DualCycle,
    forcing: Mapping[int, int],
    tree: NDHC,
    profiles: Sequence[ProfileSet],
) -> dict[VarKey, Fraction]:
    """The 0/1 point a single amenable cycle induces, as a sparse mapping.

    Every registered variable not in the mapping is zero.  Feasibility of
    the result is a theorem about the row set, so tests assert a zero
    rational residual rather than trusting this construction.
    """
    idx = _TreeIndex(tree)
    alive = relevant_nodes(tree, forcing)
    inside = cycle.inside
    one = Fraction(1)

    for pid in alive:
        budget = 0 if tree.partitions[pid].shattering else tree.Z
        if tree.crossings(cycle, pid) > budget:
            raise NotAmenable(f"cycle busts the budget at alive node {pid}")

    out: dict[VarKey, Fraction] = {}
    trace: dict[int, frozenset[int]] = {}
    for pid in alive:
        S = inside & idx.bplus[pid]
        if S not in profiles[pid]:
            raise NotAmenable(f"profile at node {pid} missing from the enumerated set")
        trace[pid] = S
        out[("x", pid, S)] = one
    for i, a in enumerate(alive):
        for b in alive[i + 1 :]:
            if idx.desc_or_self(a, b) or idx.desc_or_self(b, a):
                continue
            S = inside & (idx.bplus[a] | idx.bplus[b])
            out[("xx", a, b, S)] = one

    # exactly one alive node resolves each face that is resolvable at all
    resolver: dict[int, int] = {}
    for pid in alive:
        for face in idx.boundary[pid]:
            assert face not in resolver, "boundary sets along alive chains overlap"
            resolver[face] = pid

    pairs = sorted(
        set(_cost_pairs(tree))
        | {_pair_key(s, t) for (s, t), d in tree.dual.face_demands.items() if d}
    )
    for s, t in pairs:
        st = frozenset((s, t))
        if s in resolver:
            for p in idx.paths[resolver[s]]:
                out[("z", p, s, inside & {s}, trace[p])] = one
        if t in resolver:
            for p in idx.paths[resolver[t]]:
                out[("z", p, t, inside & {t}, trace[p])] = one
        if s in resolver and t in resolver:
            p = idx.lca(resolver[s], resolver[t])
            out[("yp", p, (s, t), inside & st, trace[p])] = one
            if len(inside & st) == 1:
                out[("yst", (s, t))] = one
    return out


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------


def _solve_exact(model: LpModel) -> LpSolution:
    from .simplex import solve_exact

    c = [Fraction(0)] * model.nvars
    for i, coef in model.objective.items():
        c[i] = coef
    res = solve_exact(
        c,
        [(coeffs, sense, rhs) for _, coeffs, sense, rhs in model.rows],
        upper=model.upper,
    )
    if res.status == "infeasible":
        raise InfeasibleModel(f"no fractional solution reaches alpha={model.alpha}")
    if res.status == "unbounded":
        raise UnboundedModel("objective unbounded; the model is malformed")
    assert res.x is not None and res.objective is not None
    return LpSolution(
        status="optimal",
        values=res.x,
        objective=res.objective,
        max_residual=model.max_residual(res.x),
        method="exact",
    )


def _solve_float(model: LpModel, tolerance: float) -> LpSolution:
    n = model.nvars
    eq_rows = [(coeffs, rhs) for _, coeffs, sense, rhs in model.rows if sense == "="]
    ub_rows = []
    for _, coeffs, sense, rhs in model.rows:
        if sense == ">=":
            ub_rows.append(({i: -c for i, c in coeffs.items()}, -rhs))
        elif sense == "<=":
            ub_rows.append((coeffs, rhs))

    def sparse(rows_: list[tuple[dict[int, Fraction], Fraction]]):
        data, ri, ci, rhs = [], [], [], []
        for r, (coeffs, b) in enumerate(rows_):
            rhs.append(float(b))
            for i, coef in coeffs.items():
                ri.append(r)
                ci.append(i)
                data.append(float(coef))
        return csr_matrix((data, (ri, ci)), shape=(len(rows_), n)), np.array(rhs)

    c = np.zeros(n)
    for i, coef in model.objective.items():
        c[i] = float(coef)
    bounds = [(0, float(model.upper[i]) if i in model.upper else None) for i in range(n)]
    A_eq, b_eq = sparse(eq_rows) if eq_rows else (None, None)
    A_ub, b_ub = sparse(ub_rows) if ub_rows else (None, None)
    res = linprog(
        c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs"
    )
    if res.status == 2:
        raise InfeasibleModel(f"no fractional solution reaches alpha={model.alpha}")
    if res.status == 3:
        raise UnboundedModel("objective unbounded; the model is malformed")
    if res.status != 0:
        raise NumericalFailure(f"solver status {res.status}: {res.message}")
    values = tuple(float(v) for v in res.x)
    max_res = model.max_residual(values)
    if max_res > tolerance:
        raise NumericalFailure(f"residual {max_res:.3g} exceeds tolerance {tolerance}")
    return LpSolution(
        status="optimal",
        values=values,
        objective=float(res.fun),
        max_residual=max_res,
        method="float",
    )


def solve_lp(
    model: LpModel, tolerance: float = 1e-7, method: str = "auto"
) -> LpSolution:
    """Minimize the separation cost subject to the model's rows.

    ``method`` is ``"exact"``, ``"float"``, or ``"auto"``, which picks the
    rational path only for models small enough for dense pivoting.
    """
    if method == "auto":
        method = "exact" if model.nvars * model.nrows <= 20_000 else "float"
    if method == "exact":
        return _solve_exact(model)
    if method == "float":
        return _solve_float(model, tolerance)
    raise PreconditionViolated(f"unknown solve method {method!r}")


# ---------------------------------------------------------------------------
# export and the demand-guess grid
# ---------------------------------------------------------------------------


def export_lp_text(model: LpModel) -> str:
    """Serialize to the plain-text LP interchange format, one var per v{i}."""
    out = ["\\ lifted cut model", "Minimize"]

    def term(c: Fraction, i: int) -> str:
        sign = "+" if c >= 0 else "-"
        return f" {sign} {abs(float(c)):.12g} v{i}"

    line = " obj:"
    for i in sorted(model.objective):
        line += term(model.objective[i], i)
    if not model.objective:
        line += " 0 v0"
    out.append(line)
    out.append("Subject To")
    for r, (name, coeffs, sense, rhs) in enumerate(model.rows):
        line = f" c{r}:"
        for i in sorted(coeffs):
            line += term(coeffs[i], i)
        op = {"=": "=", ">=": ">=", "<=": "<="}[sense]
        line += f" {op} {float(rhs):.12g}"
        out.append(line)
    out.append("Bounds")
    for i in range(model.nvars):
        ub = model.upper.get(i)
        if ub is None:
            out.append(f" 0 <= v{i}")
        else:
            out.append(f" 0 <= v{i} <= {float(ub):.12g}")
    out.append("End")
    return "\n".join(out) + "\n"


def alpha_grid(n: int, eps: Fraction | float) -> list[Fraction]:
    """Demand guesses: powers of (1 + eps) from 1 up to n**5."""
    step = Fraction(1) + Fraction(eps)
    if step <= 1:
        raise PreconditionViolated("eps must be positive")
    top = Fraction(max(2, n)) ** 5
    out = [Fraction(1)]
    while out[-1] * step <= top:
        out.append(out[-1] * step)
    return out
