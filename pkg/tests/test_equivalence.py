import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cellforge.cells import GaugeFamily, gauge_transform
from cellforge.closed_forms import construct_cells
from cellforge.equivalence import (apply_gauge, equivalent, fingerprint, gauge_objective, incidence,
                                   solve_phases)

from conftest import key_id

KEYS = [("A", 6, None), ("D", 9, "default"), ("Astar", 8, "plus"), ("E8star", 8, None),
        ("E1_12", 12, "plus"), ("E2_12", 12, "minus"), ("E5_12", 12, None)]


@pytest.mark.parametrize("key", KEYS, ids=key_id)
@given(seed=st.integers(0, 2**32 - 1))
def test_fingerprint_is_gauge_invariant(key, seed, system_cache):
    cs = system_cache(*key)
    gauge = GaugeFamily.random(cs.graph, np.random.default_rng(seed))
    moved = cs.with_cells(apply_gauge(cs.graph, cs.W, gauge.blocks))
    assert fingerprint(cs).distance(fingerprint(moved)) <= 1e-8


def test_fingerprint_serialises_as_hex(system_cache):
    d = fingerprint(system_cache("E1_12", 12, "plus")).to_dict()
    assert d["graph"] == "E1(12)"
    assert all(isinstance(x, str) for x in d["traces"])
    assert d["traces"] and d["magnitudes"]


def test_fingerprint_distance_is_infinite_across_graphs(system_cache):
    a = fingerprint(system_cache("A", 6, None))
    b = fingerprint(system_cache("A", 7, None))
    assert a.distance(b) == math.inf


@given(seed=st.integers(0, 2**32 - 1))
def test_rephased_a6_is_recovered(seed, system_cache):
    a6 = system_cache("A", 6, None)
    g = a6.graph
    theta = np.random.default_rng(seed).uniform(0, 2 * math.pi, g.n_edges)
    moved = gauge_transform(a6, GaugeFamily.from_edge_phases(g, theta))
    r = equivalent(moved, a6)
    assert r and r.status == "equivalent"
    assert np.allclose(gauge_transform(a6, r.witness).W, moved.W, atol=1e-9)


def test_a8star_variants_are_inequivalent(system_cache):
    r = equivalent(system_cache("Astar", 8, "plus"), system_cache("Astar", 8, "minus"))
    assert r.status == "inequivalent" and not r
    assert r.obstruction


def test_e1_variants_are_inequivalent(system_cache):
    p, m = system_cache("E1_12", 12, "plus"), system_cache("E1_12", 12, "minus")
    assert fingerprint(p).distance(fingerprint(m)) > 1e-3
    r = equivalent(p, m)
    assert r.status == "inequivalent"


def e1_swap_gauge(g):
    # swap both doubled edge pairs and flip the sign of the q -> r edge
    G = GaugeFamily.identity(g)
    for (x, y), ids in g._between.items():
        if len(ids) == 2:
            G.blocks[(x, y)] = np.array([[0, 1], [1, 0]], dtype=complex)
        if (g.label(x), g.label(y)) == ("q", "r"):
            G.blocks[(x, y)] = -np.eye(1, dtype=complex)
    return G


def test_e1_conjugate_explicit_witness(system_cache):
    p, m = system_cache("E1_12", 12, "plus"), system_cache("E1_12", 12, "minus")
    G = e1_swap_gauge(p.graph)
    assert gauge_objective(p.conj(), m, G) == 0.0
    assert np.array_equal(gauge_transform(m, G).W, p.conj().W)


def test_e1_conjugate_search_finds_witness(system_cache):
    p, m = system_cache("E1_12", 12, "plus"), system_cache("E1_12", 12, "minus")
    r = equivalent(p.conj(), m)
    assert r.status == "equivalent"
    assert gauge_objective(p.conj(), m, r.witness) <= 1e-14


def test_e1_random_gauge_search(system_cache):
    p = system_cache("E1_12", 12, "plus")
    G = GaugeFamily.random(p.graph, np.random.default_rng(7))
    moved = gauge_transform(p, G)
    r = equivalent(moved, p, seed=3)
    assert r.status == "equivalent"


def test_e2_conjugation_changes_the_class(system_cache):
    # E2 is simple with real cells, so conj(W+) = W+, whose moduli differ from W-
    p, m = system_cache("E2_12", 12, "plus"), system_cache("E2_12", 12, "minus")
    assert np.allclose(p.conj().W, p.W)
    assert fingerprint(p.conj()).distance(fingerprint(m)) > 1e-3
    r = equivalent(p.conj(), m)
    assert r.status == "inequivalent" and "|W| differs" in r.obstruction


def test_d9_conjugate_is_a_distinct_class(system_cache):
    w, c = system_cache("D", 9, "default"), system_cache("D", 9, "conjugate")
    assert np.allclose(c.W, w.conj().W)
    assert fingerprint(w).distance(fingerprint(c)) > 1e-3
    assert equivalent(w, c).status == "inequivalent"


def test_equivalent_rejects_mismatched_graphs(system_cache):
    with pytest.raises(ValueError):
        equivalent(system_cache("A", 5, None), system_cache("A", 6, None))


def test_solve_phases_consistent_and_inconsistent():
    # a triangle 0->1->2->0 twice: rows (1,1,1) and (1,1,1)
    B = np.array([[1, 1, 1], [1, 1, 1], [1, 0, 0]])
    theta, d = solve_phases(B, np.array([0.3, 0.3 + 2 * math.pi, -1.0]))
    assert theta is not None and d < 1e-12
    assert np.allclose(np.exp(1j * (B @ theta)), np.exp(1j * np.array([0.3, 0.3, -1.0])))
    theta, d = solve_phases(B, np.array([0.3, 0.5, 0.0]))
    assert theta is None and d == pytest.approx(0.2)


@given(vals=st.lists(st.floats(-10, 10), min_size=5, max_size=5))
def test_solve_phases_on_a_graph_incidence(vals, system_cache):
    cs = system_cache("A", 5, None)
    B = incidence(cs.graph, cs.triangles)
    theta0 = np.zeros(cs.graph.n_edges)
    theta0[:5] = vals
    delta = B @ theta0
    theta, d = solve_phases(B, delta)
    assert theta is not None
    assert np.allclose(np.exp(1j * (B @ theta)), np.exp(1j * delta), atol=1e-9)
