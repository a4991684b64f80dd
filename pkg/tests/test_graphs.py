import numpy as np
import pytest

from cellforge.catalog import (MIN_N, UNSUPPORTED_MESSAGE, a_rotation, build_A, build_graph,
                               catalog, e2_rotation, parse_selector)
from cellforge.graphs import (Graph, GraphError, Triangle, UnsupportedGraphError, check_pf,
                              graph_from_json, graph_to_json, pf_data, triangles, type_i_frames,
                              type_ii_frames, z3_orbifold)
from cellforge.qnum import QContext, qint

SPECS = catalog()


def dense_pf(g):
    # independent oracle: dense eigendecomposition, largest real eigenvalue
    w, v = np.linalg.eig(g.adjacency())
    k = int(np.argmax(w.real))
    vec = np.abs(v[:, k].real)
    return w[k].real, vec / vec[g.distinguished]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.key)
def test_pf_eigenvalue_is_q3(spec):
    g = build_graph(spec.family, spec.n)
    lam, vec = dense_pf(g)
    assert lam == pytest.approx(qint(QContext(n=spec.n), 3), abs=1e-9)
    stored = g.pf_weights / g.pf_weights[g.distinguished]
    assert np.allclose(stored, vec, atol=1e-10, rtol=0)
    r = check_pf(g)
    assert r["right"] <= 1e-9 and r["left"] <= 1e-9


@pytest.mark.parametrize("n,expected", [(4, 1), (5, 4), (6, 9), (7, 16), (12, 81)])
def test_a_triangle_counts(n, expected):
    # up triangles (k,m) with k+m <= n-4 plus down triangles with k+m <= n-5
    assert len(triangles(build_A(n))) == expected
    assert expected == (n - 3) ** 2


def test_triangle_canonical_rotation():
    assert Triangle.canonical(5, 2, 9) == Triangle(2, 9, 5)
    assert Triangle.canonical(2, 9, 5) == Triangle.canonical(9, 5, 2)


def test_loops_and_multiple_edges():
    g = build_graph("E8star")
    loop = g.triangle(2, 2, 2)
    assert len(set(loop)) == 1
    e1 = build_graph("E1_12")
    assert len(e1.edges_between(e1.vid("r"), e1.vid("p"))) == 2
    assert not e1.is_simple
    # four p -> q -> r -> p triangles through the double edges
    pqr = [t for t in triangles(e1) if sorted(e1.label(v) for v in e1.triangle_vertices(t)) == ["p", "q", "r"]]
    assert len(pqr) == 4


def test_frame_counts_small():
    g = build_A(4)
    assert len(type_i_frames(g)) == 3
    # every (a1, a4) out of a common vertex and (a2, a3) closing it
    frames = type_ii_frames(g)
    assert all(g.edges[f.a1].target == g.edges[f.a2].target for f in frames)
    assert all(g.edges[f.a3].target == g.edges[f.a4].target for f in frames)
    assert all(g.edges[f.a1].source == g.edges[f.a4].source for f in frames)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.key)
def test_graph_json_round_trip(spec):
    g = build_graph(spec.family, spec.n)
    text = graph_to_json(g)
    h = graph_from_json(text)
    assert graph_to_json(h) == text
    assert [e.tag for e in h.edges] == [e.tag for e in g.edges]


def test_selector_grammar():
    assert parse_selector("A:6").key == "A:6"
    assert parse_selector("Astar:7").family == "Astar"
    assert parse_selector("D(9)").n == 9
    assert parse_selector("E1:12").family == "E1_12"
    assert parse_selector("e24").n == 24
    with pytest.raises(GraphError):
        parse_selector("A")
    with pytest.raises(GraphError):
        parse_selector("E8:9")
    with pytest.raises(GraphError):
        parse_selector("Z:3")
    with pytest.raises(UnsupportedGraphError, match=UNSUPPORTED_MESSAGE):
        parse_selector("E4:12")
    with pytest.raises(UnsupportedGraphError):
        build_graph("E4_12")
    with pytest.raises(GraphError):
        build_graph("A", MIN_N["A"] - 1)


def shape(g):
    deg = sorted((len(g.out_edges(v)), len(g.in_edges(v))) for v in range(g.n_vertices))
    phi = sorted(np.round(g.pf_weights / g.pf_weights.max(), 9))
    return g.n_vertices, g.n_edges, deg, phi


@pytest.mark.parametrize("n", [6, 7, 9, 12])
def test_orbifold_of_A_matches_D(n):
    G = z3_orbifold(build_A(n), a_rotation(n))
    assert shape(G) == shape(build_graph("D", n))
    # a fixed vertex (only when 3 | n) splits into three copies
    nv = len(build_A(n).vertices)
    assert G.n_vertices == ((nv - 1) // 3 + 3 if n % 3 == 0 else nv // 3)


def test_orbifold_of_E2_matches_E1():
    G = z3_orbifold(build_graph("E2_12"), e2_rotation)
    assert shape(G) == shape(build_graph("E1_12"))


def test_orbifold_rejects_non_automorphism():
    g = build_A(6)
    with pytest.raises(GraphError):
        z3_orbifold(g, lambda lab: lab)


def test_two_cycle_has_no_triangles():
    g = Graph.from_labels("C2", 6, ["a", "b"], [("a", "b"), ("b", "a")], pf=[1.0, 1.0])
    assert triangles(g) == []


def test_pf_iteration_handles_period_three():
    # A(n) is 3-periodic; plain power iteration on A would oscillate
    g = build_A(9)
    lam, vec = pf_data(g)
    assert lam == pytest.approx(qint(QContext(n=9), 3), abs=1e-12)
