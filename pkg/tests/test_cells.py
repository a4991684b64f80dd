import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cellforge.catalog import build_graph
from cellforge.cells import (CellSystem, GaugeFamily, cells_from_json, cells_to_json,
                             gauge_transform, verify, verify_type_I, verify_type_II)
from cellforge.closed_forms import construct_cells, legal_variants
from cellforge.equivalence import apply_gauge
from cellforge.graphs import triangles, type_i_frames, type_ii_frames

from conftest import SYSTEM_KEYS, key_id


@pytest.mark.parametrize("key", SYSTEM_KEYS, ids=key_id)
def test_closed_forms_satisfy_both_frames(key, system_cache):
    cs = system_cache(*key)
    r = verify(cs, 1e-9)
    assert r.ok, (r.type_i, r.type_ii)


def frame_oracle(cs):
    """Both frame residuals assembled with plain loops and dictionary lookups."""
    g = cs.graph
    E = g.edges
    phi = g.pf_weights
    q2 = g.q(2)
    W = lambda a, b, c: cs[(a, b, c)]
    worst_i = 0.0
    for a in range(g.n_vertices):
        for b in range(g.n_vertices):
            top = g.edges_between(a, b)
            if not top:
                continue
            cols = [(be, ga) for be in g.out_edges(b) for ga in g.edges_between(E[be].target, a)]
            M = np.array([[W(al, be, ga) for be, ga in cols] for al in top]).reshape(len(top), len(cols))
            G = M @ M.conj().T
            worst_i = max(worst_i, np.abs(G - q2 * phi[a] * phi[b] * np.eye(len(top))).max())
    worst_ii = 0.0
    for a1, a2, a3, a4 in type_ii_frames(g):
        a, b, c, d = E[a1].source, E[a1].target, E[a3].source, E[a3].target
        s = 0j
        for x in range(g.n_vertices):
            for be in g.edges_between(b, x):
                for de in g.edges_between(d, x):
                    for g1 in g.edges_between(x, a):
                        for g2 in g.edges_between(x, c):
                            s += (W(a1, be, g1) * np.conj(W(a2, be, g2)) * W(a3, de, g2)
                                  * np.conj(W(a4, de, g1))) / phi[x]
        rhs = (phi[a] * phi[b] * phi[d] * (a1 == a2 and a3 == a4)
               + phi[a] * phi[b] * phi[c] * (a1 == a4 and a2 == a3))
        worst_ii = max(worst_ii, abs(s - rhs))
    return worst_i, worst_ii


@pytest.mark.parametrize("key", [("A", 5, "default"), ("Astar", 7, "default"), ("D", 9, "default"),
                                 ("E8star", 8, "default"), ("E1_12", 12, "minus")], ids=key_id)
def test_compiled_frames_match_loop_oracle(key, system_cache):
    cs = system_cache(*key)
    oi, oii = frame_oracle(cs)
    assert oi < 1e-9 and oii < 1e-9
    # and on a perturbed system both assemblies see the same violation
    W = cs.W.copy()
    W[0] *= 1.1
    bad = cs.with_cells(W)
    bi, bii = frame_oracle(bad)
    assert bi == pytest.approx(verify_type_I(bad), rel=1e-9)
    assert bii == pytest.approx(verify_type_II(bad), rel=1e-9)


def test_variants_are_conjugate(system_cache):
    p = system_cache("E2_12", 12, "plus")
    m = system_cache("E2_12", 12, "minus")
    assert p.variant == "plus" and p.conj().variant == "minus"
    for fam, n in [("Astar", 8), ("E1_12", 12)]:
        assert set(legal_variants(fam, n)) == {"plus", "minus"}


def test_illegal_variant_rejected():
    with pytest.raises(ValueError):
        construct_cells("A", 6, "plus")
    with pytest.raises(ValueError):
        construct_cells("D", 7, "conjugate")


@pytest.mark.parametrize("key", [("A", 7, "default"), ("Astar", 8, "minus"), ("D", 9, "conjugate"),
                                 ("E8star", 8, "default"), ("E1_12", 12, "plus"), ("E24", 24, "default")],
                         ids=key_id)
def test_cells_json_round_trip_is_exact(key, system_cache):
    cs = system_cache(*key)
    text = cells_to_json(cs)
    back = cells_from_json(text)
    assert np.array_equal(back.W, cs.W)
    assert back.variant == cs.variant
    assert cells_to_json(back) == text
    assert isinstance(json.loads(text)["cells"][0]["re"], str)


def test_missing_cells_rejected():
    g = build_graph("A", 5)
    tris = triangles(g)
    with pytest.raises(ValueError, match="missing"):
        CellSystem.from_mapping(g, {tris[0]: 1.0})


@pytest.mark.parametrize("key", [("A", 6, "default"), ("E8", 8, "default"), ("E1_12", 12, "minus")],
                         ids=key_id)
@given(seed=st.integers(0, 2**32 - 1))
def test_gauge_preserves_frames(key, seed, system_cache):
    cs = system_cache(*key)
    gauge = GaugeFamily.random(cs.graph, np.random.default_rng(seed))
    out = gauge_transform(cs, gauge)
    r = verify(out, 1e-8)
    assert r.ok
    # vectorised transform agrees with the loop
    fast = apply_gauge(cs.graph, cs.W, gauge.blocks)
    assert np.allclose(fast, out.W, atol=1e-12)


@given(seed=st.integers(0, 2**32 - 1))
def test_gauge_inverse_round_trip(seed, system_cache):
    cs = system_cache("E1_12", 12, "plus")
    gauge = GaugeFamily.random(cs.graph, np.random.default_rng(seed))
    inv = GaugeFamily(cs.graph, {k: u.conj().T for k, u in gauge.blocks.items()})
    back = gauge_transform(gauge_transform(cs, gauge), inv)
    assert np.allclose(back.W, cs.W, atol=1e-12)


def test_non_unitary_gauge_rejected(system_cache):
    cs = system_cache("A", 5, None)
    gauge = GaugeFamily.identity(cs.graph)
    key = next(iter(gauge.blocks))
    gauge.blocks[key] = 2 * gauge.blocks[key]
    with pytest.raises(ValueError):
        gauge_transform(cs, gauge)


@pytest.mark.parametrize("key", [("A", 6, "default"), ("D", 9, "default"), ("E2_12", 12, "plus")],
                         ids=key_id)
@given(k=st.integers(0, 10**6), eps=st.floats(1e-6, 1e-2))
def test_perturbation_is_detected(key, k, eps, system_cache):
    cs = system_cache(*key)
    W = cs.W.copy()
    W[k % len(W)] += eps * np.abs(W).max()
    r = verify(cs.with_cells(W), 1e-9)
    assert not r.ok
