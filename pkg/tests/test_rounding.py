"""Rounding tests: deterministic integral draws, the marginal law, the pipeline."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plancut.errors import (
    AllInfinite,
    DegenerateMass,
    NoDemand,
    NotAmenable,
    NotOnSimplex,
    PreconditionViolated,
)
from plancut.families import cycle_graph, k4, with_demands
from plancut.lp import build_lp, encode_integral, forcing_for_cycle, solve_lp
from plancut.ndhc import NDHC
from plancut.oracle import all_simple_cycles, brute_force_sparsest
from plancut.planar import CutResult, DualGraph, cut_result
from plancut.profiles import all_profiles
from plancut.rng import derive
from plancut.rounding import (
    PipelineConfig,
    Rounder,
    amplify,
    decoupling_lhs,
    pipeline,
    round_topdown,
)


def setup(g, **kw):
    tree = NDHC(DualGraph(g), seed=kw.pop("seed", 3), **kw)
    cycles = all_simple_cycles(tree.dual)
    return tree, cycles, all_profiles(tree, cycles)


SQUARE_GRAPH = with_demands(cycle_graph(4), {(1, 3): 1})
SQUARE = setup(SQUARE_GRAPH)
SQUARE_MODEL = build_lp(SQUARE[0], SQUARE[2])


def encodings(tree, cycles, profs):
    """Integral point and forcing per encodable cycle, keyed by inside set."""
    out = {}
    for c in cycles:
        try:
            fc = forcing_for_cycle(tree, c)
        except NotAmenable:
            continue
        out[c.inside] = (encode_integral(c, fc, tree, profs), fc)
    return out


SQUARE_ENC = encodings(*SQUARE)


# ---------------------------------------------------------------------------
# sampling from integral and fractional solutions
# ---------------------------------------------------------------------------


def test_integral_draws_are_deterministic() -> None:
    """A 0/1 solution leaves one positive profile per reachable state, so
    the walk has no choice: it must reproduce the encoded cycle's inside
    set, trace by trace, whatever the generator feeds it."""
    tree, _, _ = SQUARE
    assert len(SQUARE_ENC) == 6
    for inside, (enc, fc) in SQUARE_ENC.items():
        rounder = Rounder(tree, SQUARE_MODEL, enc)
        for k in range(3):
            trace = rounder.sample(derive(7, "det", k), seed=("det", k))
            assert trace.seed == ("det", k)
            assert trace.U == inside
            for pid, S in trace.chosen.items():
                assert S == trace.U & tree.boundary_plus(pid)
            for cid, pid in trace.forcing.items():
                assert fc[cid] == pid


def test_rounder_accepts_mapping_and_dense_vector() -> None:
    tree, _, _ = SQUARE
    enc, _ = SQUARE_ENC[frozenset({2, 3})]
    dense = SQUARE_MODEL.vector(enc)
    a = Rounder(tree, SQUARE_MODEL, enc)
    b = Rounder(tree, SQUARE_MODEL, dense)
    assert [a.sample(derive(3, "dense", i)).U for i in range(4)] == [
        b.sample(derive(3, "dense", i)).U for i in range(4)
    ]


def _square_mixture():
    """1/2 on inside {3}, 1/3 on {2,3}, 1/6 on {2,3,4}, all separating."""
    tree, _, profs = SQUARE
    weights = {
        frozenset({3}): Fraction(1, 2),
        frozenset({2, 3}): Fraction(1, 3),
        frozenset({2, 3, 4}): Fraction(1, 6),
    }
    mix: dict = {}
    for inside, w in weights.items():
        enc, _ = SQUARE_ENC[inside]
        for key, val in enc.items():
            mix[key] = mix.get(key, Fraction(0)) + w * val
    return weights, SQUARE_MODEL.vector(mix)


def test_mixture_follows_the_marginal_law() -> None:
    """Sampling frequencies match the solution values, pair by pair.

    The mixture weights three separating cycles 1/2, 1/3, 1/6.  Counting
    which insides put exactly one endpoint of each face pair across the
    cut gives the separation values by hand:

        (1,2)  {2,3} and {2,3,4}      1/3 + 1/6 = 1/2
        (2,3)  {3} only                           1/2
        (3,4)  {3} and {2,3}          1/2 + 1/3 = 5/6
        (1,4)  {2,3,4} only                       1/6
        (1,3)  all three (demand)                 1

    Each cut crosses two unit edges, so the objective is exactly 2.  The
    mixture is feasible with zero rational residual, the sampled inside
    frequencies sit within three binomial sigmas of the weights, and the
    per-pair separation frequencies do the same against the values above.
    """
    tree, _, _ = SQUARE
    weights, vec = _square_mixture()
    assert SQUARE_MODEL.max_residual(vec) == 0
    assert SQUARE_MODEL.objective_value(vec) == 2

    yst = {
        pair: vec[SQUARE_MODEL.index[("yst", pair)]]
        for pair in [*SQUARE_MODEL.cost_pairs, *SQUARE_MODEL.demand_pairs]
    }
    assert yst == {
        (1, 2): Fraction(1, 2),
        (2, 3): Fraction(1, 2),
        (3, 4): Fraction(5, 6),
        (1, 4): Fraction(1, 6),
        (1, 3): Fraction(1),
    }

    rounder = Rounder(tree, SQUARE_MODEL, vec)
    rng = derive(11, "mixture")
    n = 20_000
    hits: Counter = Counter()
    sep: Counter = Counter()
    for _ in range(n):
        U = rounder.sample(rng).U
        hits[U] += 1
        for s, t in yst:
            if (s in U) != (t in U):
                sep[(s, t)] += 1

    assert set(hits) == set(weights)
    for inside, w in weights.items():
        p = float(w)
        sigma = math.sqrt(p * (1 - p) / n)
        assert abs(hits[inside] / n - p) <= 3 * sigma
    for pair, val in yst.items():
        p = float(val)
        sigma = math.sqrt(p * (1 - p) / n)
        if sigma:
            assert abs(sep[pair] / n - p) <= 3 * sigma
        else:
            assert sep[pair] == n


def test_round_topdown_recovers_the_unique_optimum() -> None:
    """Triangle with costs 2, 3, 4 and demand on (1,2).

    The encodable cycles isolate single vertices at costs 6, 5, 7 for
    vertices 1, 2, 3, and only the first two separate the demand.  Any
    feasible point puts weights w1 + w2 >= 1 with w3 = 0 free mass, so
    the objective 6 w1 + 5 w2 dips to 5 only at w2 = 1: the optimum is
    the integral point for vertex 2, and one draw must return it.
    """
    g = with_demands(cycle_graph(3, costs=[2, 3, 4]), {(1, 2): 1})
    tree, cycles, profs = setup(g, seed=0)
    model = build_lp(tree, profs)
    sol = solve_lp(model, method="exact")
    U = round_topdown(tree, model, sol, derive(5, "one"))
    assert U == frozenset({2})
    assert cut_result(g, U).cost == 5


def test_corrupted_solutions_are_rejected() -> None:
    tree, _, _ = SQUARE
    root_only = {("x", tree.root_partition, frozenset()): 1}
    with pytest.raises(DegenerateMass):
        Rounder(tree, SQUARE_MODEL, root_only).sample(derive(0))
    enc, _ = SQUARE_ENC[frozenset({3})]
    deep = next(k for k in enc if k[0] == "x" and k[1] != tree.root_partition)
    halved = dict(enc)
    halved[deep] = Fraction(1, 2)
    with pytest.raises(DegenerateMass):
        Rounder(tree, SQUARE_MODEL, halved).sample(derive(0))


def test_with_alpha_shares_all_but_the_threshold_row() -> None:
    base = SQUARE_MODEL
    bumped = base.with_alpha(2)
    assert base.alpha == 1 and bumped.alpha == 2
    assert bumped.keys is base.keys and bumped.index is base.index
    diffs = [
        (a, b) for a, b in zip(base.rows, bumped.rows, strict=True) if a != b
    ]
    assert len(diffs) == 1
    (name, coeffs, sense, rhs), (name2, coeffs2, _, rhs2) = diffs[0]
    assert name == name2 == "alpha"
    assert coeffs is coeffs2
    assert (rhs, rhs2) == (Fraction(1), Fraction(2))

    enc, _ = SQUARE_ENC[frozenset({3})]
    assert {k: v for k, v in base.residuals(enc).items() if v} == {}
    assert {k: v for k, v in bumped.residuals(enc).items() if v} == {
        "alpha": Fraction(1)
    }


# ---------------------------------------------------------------------------
# the decoupling bound
# ---------------------------------------------------------------------------


def test_decoupling_frozen_examples() -> None:
    half = Fraction(1, 2)
    assert decoupling_lhs(0, half, half, 0) == half
    assert decoupling_lhs(1, 0, 0, 0) == 0
    quarter = Fraction(1, 4)
    assert decoupling_lhs(quarter, quarter, quarter, quarter) == half
    assert decoupling_lhs(0.25, 0.25, 0.25, 0.25) == pytest.approx(0.5)


def test_decoupling_rejects_off_simplex() -> None:
    with pytest.raises(NotOnSimplex):
        decoupling_lhs(-0.1, 0.5, 0.5, 0.1)
    with pytest.raises(NotOnSimplex):
        decoupling_lhs(0.2, 0.2, 0.2, 0.3)


@given(st.tuples(*[st.integers(min_value=0, max_value=20)] * 4))
@settings(max_examples=200, deadline=None)
def test_decoupling_bound_on_the_simplex(raw) -> None:
    """(a+b)(b+d) + (a+c)(c+d) >= (b+c)/2, exactly, over rational points."""
    total = sum(raw)
    if total == 0:
        return
    a, b, c, d = (Fraction(x, total) for x in raw)
    assert decoupling_lhs(a, b, c, d) >= (b + c) / 2


# ---------------------------------------------------------------------------
# amplification
# ---------------------------------------------------------------------------


def _fake(U, cost, demand):
    sp = Fraction(cost, demand) if demand else math.inf
    return CutResult(
        U=frozenset(U), edges=frozenset(), cost=cost, demand=demand, sparsity=sp
    )


def _cycling(cuts):
    it = itertools.cycle(cuts)
    return lambda rng: next(it)


def test_amplify_keeps_the_sparsest() -> None:
    cuts = [_fake({1}, 6, 2), _fake({2}, 4, 2), _fake({3}, 10, 2)]
    best = amplify(_cycling(cuts), 3, derive(0))
    assert best == cuts[1]
    ratio = Fraction(sum(c.cost for c in cuts), sum(c.demand for c in cuts))
    assert best.sparsity <= ratio


def test_amplify_tie_breaks_toward_smaller_sides() -> None:
    assert amplify(_cycling([_fake({5, 6}, 4, 2), _fake({7}, 2, 1)]), 2, derive(0)).U == {7}
    assert amplify(_cycling([_fake({3}, 2, 1), _fake({2}, 2, 1)]), 2, derive(0)).U == {2}


def test_amplify_retries_past_infinite_draws() -> None:
    finite = _fake({1}, 3, 1)
    sampler = _cycling([_fake({2}, 2, 0), _fake({4}, 1, 0), finite])
    assert amplify(sampler, 2, derive(0)) == finite


def test_amplify_degenerate_sampler_raises() -> None:
    with pytest.raises(AllInfinite):
        amplify(_cycling([_fake({2}, 2, 0)]), 3, derive(0), retries=5)
    with pytest.raises(PreconditionViolated):
        amplify(_cycling([_fake({1}, 3, 1)]), 0, derive(0))


# ---------------------------------------------------------------------------
# the pipeline end to end
# ---------------------------------------------------------------------------


def test_pipeline_matches_oracle_on_the_ring() -> None:
    res = pipeline(
        SQUARE_GRAPH,
        eps=Fraction(1, 2),
        config=PipelineConfig(seed=1, amplify_n=50),
    )
    oracle = brute_force_sparsest(SQUARE_GRAPH)
    assert res.best.sparsity == oracle.sparsity == 2
    assert res.best == res.best_outcome.cut
    assert res.best_outcome in res.outcomes
    assert all(o.cut.demand > 0 for o in res.outcomes)
    assert set(res.timings) == {"normalize", "tree", "profiles", "lp", "round"}
    assert all(t >= 0 for t in res.timings.values())


def test_pipeline_finds_a_free_cut() -> None:
    """Two of the ring's edges cost nothing, so the sparsest cut is free;
    crossing a zero-cost edge must not count against any budget."""
    g = with_demands(cycle_graph(4, costs=[0, 1, 0, 1]), {(1, 3): 1})
    res = pipeline(g, eps=Fraction(1, 2), config=PipelineConfig(seed=1, amplify_n=50))
    assert res.best.cost == 0
    assert res.best.demand >= 1
    assert res.best.sparsity == brute_force_sparsest(g).sparsity == 0


def test_pipeline_on_the_tetrahedron() -> None:
    g = with_demands(k4(), {(1, 3): 1})
    res = pipeline(g, eps=Fraction(1, 2), config=PipelineConfig(seed=1, amplify_n=50))
    assert res.best.sparsity == brute_force_sparsest(g).sparsity == 3


def test_pipeline_demands_positive_demand() -> None:
    with pytest.raises(NoDemand):
        pipeline(cycle_graph(4))


def test_pipeline_is_reproducible() -> None:
    cfg = PipelineConfig(seed=9, amplify_n=20, max_guesses=2)
    first = pipeline(SQUARE_GRAPH, config=cfg)
    second = pipeline(SQUARE_GRAPH, config=cfg)
    assert first.best == second.best
    assert first.outcomes == second.outcomes
    assert first.events == second.events


def test_pipeline_honors_guess_and_alpha_limits() -> None:
    cfg = PipelineConfig(seed=1, amplify_n=20, max_guesses=1, max_alphas=1)
    res = pipeline(SQUARE_GRAPH, config=cfg)
    assert len({o.guess_edge for o in res.outcomes}) == 1
    assert all(o.alpha == 1 for o in res.outcomes)
