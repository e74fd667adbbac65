"""Shortest-path helpers and ball-carving decomposition tests."""

from __future__ import annotations

from fractions import Fraction

import pytest

from plancut.errors import PreconditionViolated
from plancut.families import cycle_graph, grid_graph, with_demands
from plancut.ldd import check_strong_diameter, estimate_beta, ldd
from plancut.paths import dijkstra, eccentricity, path_darts, weighted_diameter
from plancut.planar import EmbeddedPlanarGraph
from plancut.rng import derive


def test_dijkstra_grid() -> None:
    g = grid_graph(3, 3)
    dist, parent = dijkstra(g, 1)
    assert dist[9] == 4
    assert dist[5] == 2
    darts = path_darts(g, parent, 9)
    assert len(darts) == 4
    assert g.dart_tail(darts[0]) == 1 and g.dart_head(darts[-1]) == 9
    for a, b in zip(darts, darts[1:]):
        assert g.dart_head(a) == g.dart_tail(b)


def test_dijkstra_weighted_detour() -> None:
    g = cycle_graph(4, costs=[1, 1, 10, 1])
    dist, _ = dijkstra(g, 1)
    assert dist == {1: 0, 2: 1, 3: 2, 4: 1}
    assert weighted_diameter(g) == 3


def test_dijkstra_restricted() -> None:
    g = grid_graph(3, 3)
    dist, _ = dijkstra(g, 1, allowed={1, 2, 3, 6, 9})
    assert dist[9] == 4  # forced along the top row and right column
    with pytest.raises(PreconditionViolated):
        eccentricity(g, 1, allowed={1, 9})


def test_dijkstra_deterministic() -> None:
    g = grid_graph(3, 4)
    a = dijkstra(g, 2)
    b = dijkstra(g, 2)
    assert a == b


def test_ldd_partitions() -> None:
    g = grid_graph(4, 4)
    for seed in range(5):
        for D in (2, 3, Fraction(7, 2)):
            rng = derive(1234, "t", str(seed), str(D))
            dec = ldd(g, D, rng)
            seen: set[int] = set()
            for part in dec.parts:
                assert part, "empty part"
                assert not (part & seen)
                seen |= part
            assert seen == set(g.vertices())
            assert check_strong_diameter(g, dec, D)
            part_of = dec.part_of()
            for ei in dec.cut_edges:
                u, v, _ = g.edges[ei]
                assert part_of[u] != part_of[v]


def test_ldd_restricted_universe() -> None:
    g = grid_graph(4, 4)
    allowed = {1, 2, 3, 5, 6, 7}
    rng = derive(99, "restricted")
    dec = ldd(g, 3, rng, allowed)
    assert set().union(*dec.parts) == allowed
    for ei in dec.cut_edges:
        u, v, _ = g.edges[ei]
        assert u in allowed and v in allowed


def test_ldd_deterministic() -> None:
    g = grid_graph(4, 4)
    d1 = ldd(g, 3, derive(7, "x"))
    d2 = ldd(g, 3, derive(7, "x"))
    assert d1 == d2


def test_zero_cost_edge_never_cut() -> None:
    # a zero-cost edge keeps its endpoints at distance zero, hence together
    g = grid_graph(2, 3, costs=[1, 1, 1, 1, 0, 1, 1])
    est = estimate_beta(g, 2, master_seed=5, samples=200)
    assert est.cut_freq[4] == 0.0
    assert est.diameter_violations == 0


def test_beta_estimate() -> None:
    g = grid_graph(3, 3)
    est = estimate_beta(g, 3, master_seed=11, samples=300)
    assert est.diameter_violations == 0
    assert 0.0 < est.beta_hat <= 8.0  # about 2 ln(n+1) plus slack
    again = estimate_beta(g, 3, master_seed=11, samples=300)
    assert again == est
